#pragma once

#include <string>

#include <json.hpp>

#include "ncilab/analysis.hpp"
#include "ncilab/blockmat.hpp"
#include "ncilab/ineq.hpp"
#include "ncilab/search.hpp"

namespace ncilab {

using nlohmann::json;

/// Rounds to 12 significant digits for reports. Non-finite values pass through.
double round_report(double x);

/// {"rows", "cols", "re", "im"}, row-major; "im" is omitted for real matrices.
/// Values are written at full precision.
json matrix_to_json(const Matrix& A);
json matrix_to_json(const RealMatrix& A);
/// "im" is optional and defaults to zeros. Throws InvalidArgument on a
/// malformed document and ShapeError when the arrays do not match rows x cols.
Matrix matrix_from_json(const json& j);

/// {"block_rows", "block_cols", "blocks": [[<matrix>, ...], ...]}.
json block_matrix_to_json(const BlockMatrix& T);
BlockMatrix block_matrix_from_json(const json& j);

/// Accepts either document type; a plain matrix becomes a grid of 1x1 blocks.
BlockMatrix block_matrix_from_any(const json& j);

/// A number, "inf", or null.
json exponent_to_json(const std::optional<SchattenOrder>& p);
SchattenOrder exponent_from_json(const json& j);

json report_to_json(const IneqReport& r);

json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const json& j);

/// {config, trial_index, p, instance, lhs, rhs, margin}; numbers at full
/// precision so the margin re-verifies.
json certificate_to_json(const ViolationCertificate& c);
ViolationCertificate certificate_from_json(const json& j);

/// One {"epsilon", "entry11", "combined11"} row per schedule point.
json epsilon_study_to_json(const EpsilonStudy& s);

json gp_violation_to_json(const GpViolation& v);

/// Parses text; throws InvalidArgument carrying the byte position on a
/// syntax error.
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

}  // namespace ncilab
