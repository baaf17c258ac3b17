#include "ncilab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "ncilab/errors.hpp"

namespace ncilab {

namespace {

const json& require_field(const json& j, const char* key, const char* what) {
    if (!j.is_object()) throw InvalidArgument(std::string(what) + ": expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidArgument(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

Eigen::Index require_count(const json& j, const char* key, const char* what) {
    const json& v = require_field(j, key, what);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw InvalidArgument(std::string(what) + ": field '" + key + "' must be a positive integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
}

std::vector<double> require_numbers(const json& v, const char* key, std::size_t expected) {
    if (!v.is_array()) throw InvalidArgument(std::string("matrix: field '") + key + "' must be an array");
    if (v.size() != expected) {
        throw ShapeError(std::string("matrix: field '") + key + "' has " + std::to_string(v.size()) +
                         " entries, expected " + std::to_string(expected));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (const json& x : v) {
        if (!x.is_number()) throw InvalidArgument(std::string("matrix: non-numeric entry in '") + key + "'");
        out.push_back(x.get<double>());
    }
    return out;
}

double number(const json& j, const char* key, const char* what) {
    const json& v = require_field(j, key, what);
    if (!v.is_number()) throw InvalidArgument(std::string(what) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

json report_number(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return round_report(x);
}

}  // namespace

double round_report(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json matrix_to_json(const Matrix& A) {
    json re = json::array();
    json im = json::array();
    bool real = true;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            re.push_back(A(i, j).real());
            im.push_back(A(i, j).imag());
            real = real && A(i, j).imag() == 0.0;
        }
    json out = {{"rows", A.rows()}, {"cols", A.cols()}, {"re", std::move(re)}};
    if (!real) out["im"] = std::move(im);
    return out;
}

json matrix_to_json(const RealMatrix& A) { return matrix_to_json(to_complex(A)); }

Matrix matrix_from_json(const json& j) {
    const Eigen::Index rows = require_count(j, "rows", "matrix");
    const Eigen::Index cols = require_count(j, "cols", "matrix");
    const auto n = static_cast<std::size_t>(rows * cols);
    const std::vector<double> re = require_numbers(require_field(j, "re", "matrix"), "re", n);
    std::vector<double> im(n, 0.0);
    if (const auto it = j.find("im"); it != j.end() && !it->is_null()) im = require_numbers(*it, "im", n);

    Matrix A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto k = static_cast<std::size_t>(i * cols + c);
            A(i, c) = Complex{re[k], im[k]};
        }
    return A;
}

json block_matrix_to_json(const BlockMatrix& T) {
    json grid = json::array();
    for (const auto& row : T.blocks()) {
        json r = json::array();
        for (const Matrix& b : row) r.push_back(matrix_to_json(b));
        grid.push_back(std::move(r));
    }
    return {{"block_rows", T.block_rows()}, {"block_cols", T.block_cols()}, {"blocks", std::move(grid)}};
}

BlockMatrix block_matrix_from_json(const json& j) {
    const Eigen::Index M = require_count(j, "block_rows", "block matrix");
    const Eigen::Index N = require_count(j, "block_cols", "block matrix");
    const json& grid = require_field(j, "blocks", "block matrix");
    if (!grid.is_array() || static_cast<Eigen::Index>(grid.size()) != M) {
        throw ShapeError("block matrix: 'blocks' must hold block_rows rows");
    }
    std::vector<std::vector<Matrix>> blocks;
    for (const json& row : grid) {
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != N) {
            throw ShapeError("block matrix: every row of 'blocks' must hold block_cols matrices");
        }
        std::vector<Matrix> r;
        for (const json& b : row) r.push_back(matrix_from_json(b));
        blocks.push_back(std::move(r));
    }
    return BlockMatrix(std::move(blocks));
}

BlockMatrix block_matrix_from_any(const json& j) {
    if (j.is_object() && j.contains("blocks")) return block_matrix_from_json(j);
    return BlockMatrix::from_scalars(matrix_from_json(j));
}

json exponent_to_json(const std::optional<SchattenOrder>& p) {
    if (!p) return nullptr;
    if (p->is_infinite()) return "inf";
    return p->value();
}

SchattenOrder exponent_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return SchattenOrder::infinity();
    if (!j.is_number()) throw InvalidArgument("exponent must be a number or \"inf\"");
    return SchattenOrder(j.get<double>());
}

json report_to_json(const IneqReport& r) {
    return {
        {"name", r.name},
        {"norm", r.norm},
        {"p", exponent_to_json(r.exponent)},
        {"lhs", report_number(r.lhs)},
        {"rhs", report_number(r.rhs)},
        {"direction", to_string(r.direction)},
        {"margin", report_number(r.margin)},
        {"satisfied", r.satisfied},
        {"tol", r.tol},
        {"scope", r.scope},
    };
}

json config_to_json(const SearchConfig& c) {
    json grid = json::array();
    for (const SchattenOrder& p : c.p_grid) grid.push_back(exponent_to_json(p));
    return {
        {"ensemble", to_string(c.ensemble)},
        {"shape", {c.shape.block_rows, c.shape.block_cols, c.shape.block_height, c.shape.block_width}},
        {"p_grid", std::move(grid)},
        {"trials", c.trials},
        {"seed", c.seed},
        {"refine_steps", c.refine_steps},
        {"construction", to_string(c.construction)},
    };
}

SearchConfig config_from_json(const json& j) {
    SearchConfig c;
    const json& ens = require_field(j, "ensemble", "config");
    if (!ens.is_string()) throw InvalidArgument("config: 'ensemble' must be a string");
    c.ensemble = ensemble_from_string(ens.get<std::string>());
    const json& shape = require_field(j, "shape", "config");
    if (!shape.is_array() || shape.size() != 4) throw InvalidArgument("config: 'shape' must be [M, N, h, w]");
    for (const json& s : shape) {
        if (!s.is_number_integer()) throw InvalidArgument("config: 'shape' entries must be integers");
    }
    c.shape = {shape[0].get<Eigen::Index>(), shape[1].get<Eigen::Index>(), shape[2].get<Eigen::Index>(),
               shape[3].get<Eigen::Index>()};
    const json& grid = require_field(j, "p_grid", "config");
    if (!grid.is_array()) throw InvalidArgument("config: 'p_grid' must be an array");
    for (const json& p : grid) c.p_grid.push_back(exponent_from_json(p));
    c.trials = require_field(j, "trials", "config").get<std::size_t>();
    c.seed = require_field(j, "seed", "config").get<std::uint64_t>();
    c.refine_steps = require_field(j, "refine_steps", "config").get<std::size_t>();
    if (const auto it = j.find("construction"); it != j.end()) {
        c.construction = construction_from_string(it->get<std::string>());
    }
    return c;
}

json certificate_to_json(const ViolationCertificate& c) {
    return {
        {"config", config_to_json(c.config)},
        {"trial_index", c.trial_index},
        {"p", exponent_to_json(c.p)},
        {"instance", block_matrix_to_json(c.instance)},
        {"lhs", c.lhs},
        {"rhs", c.rhs},
        {"margin", c.margin},
        {"extended_margin", c.extended_margin},
    };
}

ViolationCertificate certificate_from_json(const json& j) {
    const char* what = "certificate";
    ViolationCertificate c{
        config_from_json(require_field(j, "config", what)),
        require_field(j, "trial_index", what).get<std::size_t>(),
        exponent_from_json(require_field(j, "p", what)),
        block_matrix_from_json(require_field(j, "instance", what)),
        number(j, "lhs", what),
        number(j, "rhs", what),
        number(j, "margin", what),
        std::numeric_limits<double>::quiet_NaN(),
    };
    if (const auto it = j.find("extended_margin"); it != j.end() && it->is_number()) {
        c.extended_margin = it->get<double>();
    }
    return c;
}

json epsilon_study_to_json(const EpsilonStudy& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
        rows.push_back({{"epsilon", s.epsilons[i]},
                        {"entry11", report_number(s.entries_11[i])},
                        {"combined11", report_number(s.combined_11[i])}});
    }
    return rows;
}

json gp_violation_to_json(const GpViolation& v) {
    return {
        {"A", matrix_to_json(v.A)},
        {"B", matrix_to_json(v.B)},
        {"g_sum", report_number(v.g_sum)},
        {"g_a", report_number(v.g_a)},
        {"g_b", report_number(v.g_b)},
        {"margin", report_number(v.margin)},
        {"trial", v.trial},
    };
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

}  // namespace ncilab
