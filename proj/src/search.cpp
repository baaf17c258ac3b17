#include "ncilab/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "ncilab/errors.hpp"

namespace ncilab {

namespace {

struct EntryRef {
    Eigen::Index block_row;
    Eigen::Index block_col;
    Eigen::Index row;
    Eigen::Index col;
};

std::vector<EntryRef> nonzero_entries(const BlockMatrix& T) {
    std::vector<EntryRef> out;
    for (Eigen::Index i = 0; i < T.block_rows(); ++i)
        for (Eigen::Index j = 0; j < T.block_cols(); ++j) {
            const Matrix& b = T.block(i, j);
            for (Eigen::Index c = 0; c < b.cols(); ++c)
                for (Eigen::Index r = 0; r < b.rows(); ++r)
                    if (b(r, c) != Complex{0.0, 0.0}) out.push_back({i, j, r, c});
        }
    return out;
}

Matrix diagonal_block(CounterRng& rng, Eigen::Index d) {
    Matrix b = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) b(k, k) = std::abs(rng.normal());
    return b;
}

// First diagonal: C(eps), second: a small bump at grid position (1,1);
// every entry jittered multiplicatively.
BlockMatrix c_matrix_construction(CounterRng& rng, Eigen::Index d) {
    const double eps = std::pow(10.0, rng.uniform(-4.0, -2.0));
    const double bump = std::pow(10.0, rng.uniform(-3.5, -2.2));
    const double C[3][3] = {{eps, 1.0, eps}, {1.0, eps, 1.0}, {eps, 1.0, 1.0}};
    std::vector<std::vector<Matrix>> grid(3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Matrix b = Matrix::Zero(d, d);
            b(0, 0) = C[i][j] * (1.0 + 0.05 * rng.normal());
            if (i == 0 && j == 0) b(1, 1) = bump * (1.0 + 0.05 * rng.normal());
            b = b.cwiseAbs().cast<Complex>();
            grid[i].push_back(std::move(b));
        }
    }
    return BlockMatrix(std::move(grid));
}

double certification_scale(double lhs, double rhs) {
    return std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

std::string to_string(Ensemble e) {
    switch (e) {
        case Ensemble::GeneralComplex: return "general-complex";
        case Ensemble::Real: return "real";
        case Ensemble::PsdGram: return "psd-gram";
        case Ensemble::DiagonalBlocks: return "diagonal-blocks";
        case Ensemble::ScalarBlocks: return "scalar-blocks";
        case Ensemble::Rank1Blocks: return "rank1-blocks";
        case Ensemble::ProportionalRows: return "proportional-rows";
        case Ensemble::Rank1Compression: return "rank1-compression";
    }
    return "?";
}

Ensemble ensemble_from_string(std::string_view name) {
    for (const Ensemble e : {Ensemble::GeneralComplex, Ensemble::Real, Ensemble::PsdGram,
                             Ensemble::DiagonalBlocks, Ensemble::ScalarBlocks, Ensemble::Rank1Blocks,
                             Ensemble::ProportionalRows, Ensemble::Rank1Compression}) {
        if (to_string(e) == name) return e;
    }
    throw InvalidArgument("unknown ensemble '" + std::string(name) + "'");
}

std::string to_string(Construction c) {
    return c == Construction::CMatrix ? "c-matrix" : "none";
}

Construction construction_from_string(std::string_view name) {
    if (name == "none") return Construction::None;
    if (name == "c-matrix") return Construction::CMatrix;
    throw InvalidArgument("unknown construction '" + std::string(name) + "'");
}

void SearchConfig::validate() const {
    if (trials < 1) throw InvalidArgument("search config: trials must be >= 1");
    if (p_grid.empty()) throw InvalidArgument("search config: empty exponent grid");
    const GridShape& s = shape;
    if (s.block_rows < 1 || s.block_cols < 1 || s.block_height < 1 || s.block_width < 1) {
        throw InvalidArgument("search config: shape entries must be >= 1");
    }
    switch (ensemble) {
        case Ensemble::ScalarBlocks:
            if (s.block_height != 1 || s.block_width != 1) {
                throw InvalidArgument("search config: scalar-blocks needs 1x1 blocks");
            }
            break;
        case Ensemble::DiagonalBlocks:
            if (s.block_height != s.block_width) {
                throw InvalidArgument("search config: diagonal-blocks needs square blocks");
            }
            break;
        case Ensemble::PsdGram:
            if (s.block_rows != s.block_cols || s.block_height != s.block_width) {
                throw InvalidArgument("search config: psd-gram needs a square grid of square blocks");
            }
            break;
        default: break;
    }
    if (construction == Construction::CMatrix &&
        (ensemble != Ensemble::DiagonalBlocks || s.block_rows != 3 || s.block_cols != 3 || s.block_height < 2)) {
        throw InvalidArgument("search config: c-matrix construction needs 3x3 diagonal blocks of size >= 2");
    }
}

BlockMatrix random_instance(const SearchConfig& config, std::size_t trial_index,
                            std::optional<SchattenOrder> normalize_at) {
    config.validate();
    if (trial_index >= config.trials) throw InvalidArgument("random_instance: trial index out of range");

    CounterRng rng(config.seed, trial_index, 0);
    const GridShape& s = config.shape;
    const Eigen::Index h = s.block_height;
    const Eigen::Index w = s.block_width;

    if (config.construction == Construction::CMatrix) return c_matrix_construction(rng, h);

    if (config.ensemble == Ensemble::PsdGram) {
        const Matrix G = random_ginibre(rng, s.block_rows * h, s.block_cols * w);
        const Matrix flat = G.adjoint() * G;
        std::vector<std::vector<Matrix>> grid(s.block_rows);
        for (Eigen::Index i = 0; i < s.block_rows; ++i)
            for (Eigen::Index j = 0; j < s.block_cols; ++j) grid[i].push_back(flat.block(i * h, j * w, h, w));
        return BlockMatrix(std::move(grid));
    }

    std::vector<Matrix> row_factor;
    if (config.ensemble == Ensemble::ProportionalRows) {
        for (Eigen::Index i = 0; i < s.block_rows; ++i) row_factor.push_back(random_ginibre(rng, h, w));
    }
    std::vector<double> weights;
    std::vector<double> row_scale;
    const SchattenOrder p_norm = normalize_at.value_or(config.p_grid.front());
    if (config.ensemble == Ensemble::Rank1Compression) {
        double total = 0.0;
        for (Eigen::Index j = 0; j < s.block_cols; ++j) {
            weights.push_back(rng.uniform() + 1e-3);
            total += weights.back();
        }
        for (double& x : weights) x /= total;
        for (Eigen::Index i = 0; i < s.block_rows; ++i) row_scale.push_back(0.1 + std::abs(rng.normal()));
    }

    std::vector<std::vector<Matrix>> grid(s.block_rows);
    for (Eigen::Index i = 0; i < s.block_rows; ++i) {
        for (Eigen::Index j = 0; j < s.block_cols; ++j) {
            Matrix b;
            switch (config.ensemble) {
                case Ensemble::GeneralComplex: b = random_ginibre(rng, h, w); break;
                case Ensemble::Real: b = random_gaussian(rng, h, w).cast<Complex>(); break;
                case Ensemble::DiagonalBlocks: b = diagonal_block(rng, h); break;
                case Ensemble::ScalarBlocks: b = Matrix::Constant(1, 1, Complex{rng.normal(), 0.0}); break;
                case Ensemble::Rank1Blocks: b = random_ginibre(rng, h, 1) * random_ginibre(rng, 1, w); break;
                case Ensemble::ProportionalRows: b = rng.normal() * row_factor[i]; break;
                case Ensemble::Rank1Compression: {
                    b = random_ginibre(rng, h, w);
                    b *= std::sqrt(weights[j]) * row_scale[i] / schatten_norm(b, p_norm);
                    break;
                }
                case Ensemble::PsdGram: break;
            }
            grid[i].push_back(std::move(b));
        }
    }
    return BlockMatrix(std::move(grid));
}

RefineResult refine_violation(const BlockMatrix& start, SchattenOrder p, std::size_t steps, CounterRng& rng,
                              double tol) {
    RefineResult out{start, check_nci(start, p, tol), {}};
    const std::vector<EntryRef> entries = nonzero_entries(start);
    if (entries.empty()) return out;

    double step = 1e-2;
    int rejections = 0;
    for (std::size_t n = 0; n < steps; ++n) {
        const EntryRef& e = entries[rng.index(entries.size())];
        Matrix block = out.instance.block(e.block_row, e.block_col);
        Complex& z = block(e.row, e.col);
        if (z.imag() == 0.0) {
            z *= 1.0 + step * rng.normal();
        } else {
            z *= Complex{1.0, 0.0} + step * rng.complex_normal();
        }
        BlockMatrix candidate = out.instance.with_block(e.block_row, e.block_col, std::move(block));
        IneqReport report = check_nci(candidate, p, tol);
        if (report.margin < out.report.margin) {
            out.instance = std::move(candidate);
            out.report = std::move(report);
            out.accepted_margins.push_back(out.report.margin);
            rejections = 0;
        } else if (++rejections == 20) {
            step *= 0.5;
            rejections = 0;
        }
    }
    return out;
}

double extended_nci_margin(const BlockMatrix& T, SchattenOrder p) {
    const long double lhs = schatten_norm_extended(assemble(T), p);
    Matrix compressed(T.block_rows(), T.block_cols());
    for (Eigen::Index i = 0; i < T.block_rows(); ++i)
        for (Eigen::Index j = 0; j < T.block_cols(); ++j)
            compressed(i, j) = static_cast<double>(schatten_norm_extended(T.block(i, j), p));
    const long double rhs = schatten_norm_extended(compressed, p);
    const long double diff = lhs - rhs;
    switch (nci_direction(p)) {
        case Direction::LhsLeRhs: return static_cast<double>(-diff);
        case Direction::LhsGeRhs: return static_cast<double>(diff);
        case Direction::Equality: return static_cast<double>(-std::abs(diff));
    }
    return 0.0;
}

std::vector<ViolationCertificate> search_violations(const SearchConfig& config, double tol) {
    config.validate();

    const auto run_trial = [&](std::size_t trial) {
        std::vector<ViolationCertificate> found;
        const BlockMatrix base = random_instance(config, trial);
        for (std::size_t k = 0; k < config.p_grid.size(); ++k) {
            const SchattenOrder p = config.p_grid[k];
            const BlockMatrix T =
                config.ensemble == Ensemble::Rank1Compression ? random_instance(config, trial, p) : base;
            const IneqReport raw = check_nci(T, p, tol);
            if (raw.satisfied) continue;

            CounterRng rng(config.seed, trial, 1 + k);
            RefineResult refined = refine_violation(T, p, config.refine_steps, rng, tol);
            const IneqReport& r = refined.report;
            const double ext = extended_nci_margin(refined.instance, p);
            if (ext < -tol * certification_scale(r.lhs, r.rhs)) {
                found.push_back({config, trial, p, std::move(refined.instance), r.lhs, r.rhs, r.margin, ext});
            }
        }
        return found;
    };

    std::vector<std::vector<ViolationCertificate>> per_trial(config.trials);
    unsigned jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, config.trials));

    if (jobs <= 1) {
        for (std::size_t t = 0; t < config.trials; ++t) per_trial[t] = run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next++; t < config.trials; t = next++) {
                    try {
                        per_trial[t] = run_trial(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& worker : workers) worker.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<ViolationCertificate> out;
    for (auto& certs : per_trial)
        for (auto& c : certs) out.push_back(std::move(c));
    std::stable_sort(out.begin(), out.end(), [](const ViolationCertificate& a, const ViolationCertificate& b) {
        return a.margin < b.margin;
    });
    return out;
}

IneqReport reverify(const ViolationCertificate& cert, double tol) { return check_nci(cert.instance, cert.p, tol); }

bool certificate_reverifies(const ViolationCertificate& cert, double tol) {
    const IneqReport r = reverify(cert, tol);
    const bool same_margin = std::abs(r.margin - cert.margin) <= 1e-12 * std::max(1.0, std::abs(cert.margin));
    return same_margin && !r.satisfied;
}

namespace {

struct PsdFactorization {
    std::vector<Matrix> G;  // d x d, D_k = G_k G_k* rescaled
    std::vector<Matrix> W;  // m x d isometries
};

Matrix orthonormalize(const Matrix& W) {
    Eigen::HouseholderQR<Matrix> qr(W);
    return qr.householderQ() * Matrix::Identity(W.rows(), W.cols());
}

PsdFactorization sample_factorization(CounterRng& rng, std::size_t n, Eigen::Index d) {
    const Eigen::Index m = rng.uniform() < 0.5 ? d : static_cast<Eigen::Index>(n) * d;
    PsdFactorization f;
    for (std::size_t k = 0; k < n; ++k) {
        f.G.push_back(random_ginibre(rng, d, d));
        f.W.push_back(random_isometry(rng, m, d));
    }
    return f;
}

Matrix materialize(const PsdFactorization& f, const std::vector<double>& norms, SchattenOrder q) {
    const Eigen::Index d = f.G.front().rows();
    const Eigen::Index m = f.W.front().rows();
    Matrix V(m, static_cast<Eigen::Index>(f.G.size()) * d);
    for (std::size_t k = 0; k < f.G.size(); ++k) {
        Matrix D = f.G[k] * f.G[k].adjoint();
        const double norm = schatten_norm(D, q);
        D = norm > 0.0 ? Matrix(D * (norms[k] / norm)) : Matrix::Zero(d, d);
        V.middleCols(static_cast<Eigen::Index>(k) * d, d) = f.W[k] * hermitian_power(D, 0.5);
    }
    return V.adjoint() * V;
}

}  // namespace

VariationalProbe probe_variational(const std::vector<double>& q_vals, const std::vector<double>& r_vals,
                                   SchattenOrder q, std::size_t trials, std::uint64_t seed, Eigen::Index block_dim,
                                   std::size_t refine_steps) {
    if (q.value() < 0.5) throw InvalidArgument("probe_variational: requires q >= 0.5");
    if (q_vals.empty() || q_vals.size() != r_vals.size()) {
        throw InvalidArgument("probe_variational: q_vals and r_vals must be non-empty and of equal length");
    }
    if (block_dim < 1 || trials < 1) throw InvalidArgument("probe_variational: block_dim and trials must be >= 1");
    for (std::size_t k = 0; k < q_vals.size(); ++k) {
        if (!(q_vals[k] >= 0.0) || !(r_vals[k] >= 0.0)) throw DomainError("probe_variational: negative block norm");
    }

    double sq = 0.0, sr = 0.0, y = 0.0;
    for (std::size_t k = 0; k < q_vals.size(); ++k) {
        sq += q_vals[k];
        sr += r_vals[k];
        y += std::sqrt(q_vals[k] * r_vals[k]);
    }
    Eigen::Matrix2d closed;
    closed << sq, y, y, sr;
    const double rhs = schatten_norm(to_complex(closed), q);

    // Maximize for norms, minimize for quasi-norms.
    const double sense = q.value() >= 1.0 ? 1.0 : -1.0;
    const std::size_t n = q_vals.size();
    const auto objective = [&](const PsdFactorization& fq, const PsdFactorization& fr, Matrix& Q, Matrix& R) {
        Q = materialize(fq, q_vals, q);
        R = materialize(fr, r_vals, q);
        return schatten_norm(Q + R, q);
    };

    PsdFactorization best_q, best_r;
    Matrix best_Q, best_R;
    double best = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, t, 0x70726f6265);
        PsdFactorization fq = sample_factorization(rng, n, block_dim);
        PsdFactorization fr = sample_factorization(rng, n, block_dim);
        Matrix Q, R;
        const double value = objective(fq, fr, Q, R);
        if (t == 0 || sense * value > sense * best) {
            best = value;
            best_q = std::move(fq);
            best_r = std::move(fr);
            best_Q = std::move(Q);
            best_R = std::move(R);
        }
    }

    CounterRng rng(seed, trials, 0x726566696e65);
    double step = 0.3;
    int rejections = 0;
    for (std::size_t s = 0; s < refine_steps; ++s) {
        PsdFactorization fq = best_q;
        PsdFactorization fr = best_r;
        PsdFactorization& target = rng.uniform() < 0.5 ? fq : fr;
        const std::size_t k = rng.index(n);
        if (rng.uniform() < 0.5) {
            target.G[k] += step * random_ginibre(rng, block_dim, block_dim);
        } else {
            target.W[k] = orthonormalize(target.W[k] + step * random_ginibre(rng, target.W[k].rows(), block_dim));
        }
        Matrix Q, R;
        const double value = objective(fq, fr, Q, R);
        if (sense * value > sense * best) {
            best = value;
            best_q = std::move(fq);
            best_r = std::move(fr);
            best_Q = std::move(Q);
            best_R = std::move(R);
            rejections = 0;
        } else if (++rejections == 20) {
            step *= 0.5;
            rejections = 0;
        }
    }

    const Direction dir = q.value() >= 1.0 ? Direction::LhsLeRhs : Direction::LhsGeRhs;
    return {make_report("variational", q, best, rhs, dir, 1e-6, "open"), std::move(best_Q), std::move(best_R)};
}

}  // namespace ncilab
