#include "rrcover/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "rrcover/errors.hpp"
#include "rrcover/rng.hpp"

namespace rrcover {

const std::vector<OffspringLaw::Atom>& OffspringLaw::atoms(int type) const {
    if (type < 1 || type > type_count_) throw std::out_of_range("type out of range");
    return atoms_[static_cast<std::size_t>(type - 1)];
}

int good_children_count(const BaseGraph& graph, int type_i, int type_j, int rotor_state) {
    const auto& children = graph.children(type_i);
    if (rotor_state < 0 || rotor_state > static_cast<int>(children.size())) {
        throw std::domain_error("rotor state " + std::to_string(rotor_state) +
                                " outside 0.." + std::to_string(children.size()));
    }
    int count = 0;
    for (std::size_t l = static_cast<std::size_t>(rotor_state); l < children.size(); ++l) {
        if (children[l] == type_j) ++count;
    }
    return count;
}

OffspringLaw offspring_law(const BaseGraph& graph, const RotorDistributionFamily& dists) {
    const int m = graph.type_count();
    if (dists.type_count() != m) throw std::invalid_argument("distribution/graph type count mismatch");
    std::vector<std::vector<OffspringLaw::Atom>> per_type;
    per_type.reserve(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        std::map<std::vector<int>, OffspringLaw::Atom> merged;
        for (int k = 0; k <= graph.degree(i); ++k) {
            const double p = dists.probability(i, k);
            const bool keep = dists.exact() ? !dists.exact_probability(i, k).is_zero() : p > 0.0;
            if (!keep) continue;
            std::vector<int> counts(static_cast<std::size_t>(m), 0);
            for (int j = 1; j <= m; ++j) {
                counts[static_cast<std::size_t>(j - 1)] = good_children_count(graph, i, j, k);
            }
            auto& atom = merged[counts];
            atom.counts = counts;
            atom.probability += p;
            if (dists.exact()) atom.exact_probability += dists.exact_probability(i, k);
        }
        std::vector<OffspringLaw::Atom> atoms;
        atoms.reserve(merged.size());
        for (auto& [counts, atom] : merged) atoms.push_back(std::move(atom));
        per_type.push_back(std::move(atoms));
    }
    return OffspringLaw(m, std::move(per_type), dists.exact());
}

double pgf_eval(const OffspringLaw& law, int type, std::span<const double> z) {
    if (static_cast<int>(z.size()) != law.type_count()) {
        throw std::invalid_argument("argument dimension mismatch");
    }
    for (double zj : z) {
        if (!(zj >= 0.0 && zj <= 1.0)) throw std::domain_error("pgf argument outside [0,1]");
    }
    double total = 0.0;
    for (const auto& atom : law.atoms(type)) {
        double term = atom.probability;
        for (std::size_t j = 0; j < z.size(); ++j) {
            for (int c = 0; c < atom.counts[j]; ++c) term *= z[j];
        }
        total += term;
    }
    return total;
}

Rational pgf_eval_exact(const OffspringLaw& law, int type, std::span<const Rational> z) {
    if (!law.exact()) throw std::logic_error("offspring law is not exact");
    if (static_cast<int>(z.size()) != law.type_count()) {
        throw std::invalid_argument("argument dimension mismatch");
    }
    for (const auto& zj : z) {
        if (zj.is_negative() || Rational(1) < zj) throw std::domain_error("pgf argument outside [0,1]");
    }
    Rational total = 0;
    for (const auto& atom : law.atoms(type)) {
        Rational term = atom.exact_probability;
        for (std::size_t j = 0; j < z.size(); ++j) {
            for (int c = 0; c < atom.counts[j]; ++c) term *= z[j];
        }
        total += term;
    }
    return total;
}

MomentMatrix moment_matrix(const BaseGraph& graph, const RotorDistributionFamily& dists) {
    const int m = graph.type_count();
    if (dists.type_count() != m) throw std::invalid_argument("distribution/graph type count mismatch");
    MomentMatrix out;
    out.size = m;
    out.exact = dists.exact();
    out.values.assign(static_cast<std::size_t>(m) * m, 0.0);
    if (out.exact) out.exact_values.assign(static_cast<std::size_t>(m) * m, Rational(0));
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            const std::size_t idx = static_cast<std::size_t>((i - 1) * m + (j - 1));
            if (out.exact) {
                Rational sum = 0;
                for (int k = 0; k <= graph.degree(i); ++k) {
                    sum += dists.exact_probability(i, k) *
                           Rational(good_children_count(graph, i, j, k));
                }
                out.exact_values[idx] = sum;
                out.values[idx] = sum.to_double();
            } else {
                double sum = 0.0;
                for (int k = 0; k <= graph.degree(i); ++k) {
                    sum += dists.probability(i, k) * good_children_count(graph, i, j, k);
                }
                out.values[idx] = sum;
            }
        }
    }
    return out;
}

namespace {

// Largest real root of x^2 - trace x + det = 0; for a nonnegative 2x2 matrix
// the discriminant is nonnegative and this root is the Perron root.
double perron_2x2(double trace, double det) {
    const double disc = trace * trace - 4.0 * det;
    return 0.5 * (trace + std::sqrt(std::max(disc, 0.0)));
}

}  // namespace

double spectral_radius(const MomentMatrix& m, double rel_tol) {
    const int n = m.size;
    if (n == 1) return m.at(1, 1);
    if (n == 2) {
        const double trace = m.at(1, 1) + m.at(2, 2);
        const double det = m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1);
        return perron_2x2(trace, det);
    }
    // Power iteration on M + I; the shift makes the Perron eigenvalue
    // strictly dominant in modulus for any nonnegative matrix. The stop rule
    // certifies the Rayleigh quotient through its eigen-residual, so a slow
    // drift (defective dominant eigenvalue) can never pass off an unconverged
    // value as the answer.
    constexpr std::int64_t kMaxIters = 1000000;
    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t it = 0; it < kMaxIters; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = x[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                acc += m.values[static_cast<std::size_t>(i * n + j)] * x[static_cast<std::size_t>(j)];
            }
            y[static_cast<std::size_t>(i)] = acc;
        }
        double dot_xy = 0.0;
        double dot_xx = 0.0;
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            dot_xy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            dot_xx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            norm = std::max(norm, std::abs(y[static_cast<std::size_t>(i)]));
        }
        if (norm == 0.0) return 0.0;  // nilpotent step emptied the vector
        const double rayleigh = dot_xy / dot_xx;
        double residual = 0.0;
        for (int i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(y[static_cast<std::size_t>(i)] -
                                                   rayleigh * x[static_cast<std::size_t>(i)]));
        }
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / norm;
        if (residual <= rel_tol * std::max(1.0, norm)) {
            return rayleigh - 1.0;
        }
    }
    throw NumericError("spectral radius power iteration did not converge", x);
}

bool positive_regular(const MomentMatrix& m) {
    const int n = m.size;
    std::vector<bool> support(static_cast<std::size_t>(n) * n);
    for (std::size_t idx = 0; idx < support.size(); ++idx) support[idx] = m.values[idx] > 0.0;
    const int bound = n * n - 2 * n + 2;
    std::vector<bool> power = support;
    for (int e = 1; e <= std::max(bound, 1); ++e) {
        bool all = true;
        for (bool b : power) all = all && b;
        if (all) return true;
        // power <- power * support (boolean)
        std::vector<bool> next(static_cast<std::size_t>(n) * n, false);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                if (!power[static_cast<std::size_t>(i * n + k)]) continue;
                for (int j = 0; j < n; ++j) {
                    if (support[static_cast<std::size_t>(k * n + j)]) {
                        next[static_cast<std::size_t>(i * n + j)] = true;
                    }
                }
            }
        }
        power = std::move(next);
    }
    return false;
}

bool singular(const OffspringLaw& law) {
    for (int i = 1; i <= law.type_count(); ++i) {
        for (const auto& atom : law.atoms(i)) {
            int total = 0;
            for (int c : atom.counts) total += c;
            if (total != 1) return false;
        }
    }
    return true;
}

namespace {

// Exact test of the Perron root against 1 via det(I - M), computed by
// fraction-free-ish Gaussian elimination over rationals. Returns the sign of
// det(I - M): 0 means 1 is an eigenvalue.
int det_i_minus_m_sign(const MomentMatrix& m) {
    const int n = m.size;
    std::vector<Rational> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Rational entry = m.exact_values[static_cast<std::size_t>(i * n + j)];
            a[static_cast<std::size_t>(i * n + j)] = (i == j ? Rational(1) - entry : -entry);
        }
    }
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (!a[static_cast<std::size_t>(r * n + col)].is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot * n + j)],
                          a[static_cast<std::size_t>(col * n + j)]);
            }
            sign = -sign;
        }
        const Rational p = a[static_cast<std::size_t>(col * n + col)];
        if (p.is_negative()) sign = -sign;
        for (int r = col + 1; r < n; ++r) {
            const Rational factor = a[static_cast<std::size_t>(r * n + col)] / p;
            if (factor.is_zero()) continue;
            for (int j = col; j < n; ++j) {
                a[static_cast<std::size_t>(r * n + j)] -=
                    factor * a[static_cast<std::size_t>(col * n + j)];
            }
        }
    }
    return sign;
}

}  // namespace

ClassificationResult classify(const BaseGraph& graph, const RotorDistributionFamily& dists,
                              double criticality_tol) {
    const auto law = offspring_law(graph, dists);
    const auto m = moment_matrix(graph, dists);
    ClassificationResult result;
    result.positive_regular = positive_regular(m);
    result.singular = singular(law);
    result.spectral_radius = spectral_radius(m);

    bool transient = result.spectral_radius > 1.0 + criticality_tol;
    bool critical = std::abs(result.spectral_radius - 1.0) <= criticality_tol;
    if (m.exact) {
        // Exact resolution of the boundary: 1 is an eigenvalue iff
        // det(I - M) = 0, and it is the Perron root iff no larger one exists,
        // which the float estimate settles comfortably at this tolerance.
        // Rational overflow (possible for large matrices with wild
        // denominators) falls back to the float tolerance above.
        try {
            const int sign = det_i_minus_m_sign(m);
            if (m.size <= 2) {
                const Rational trace =
                    m.exact_at(1, 1) + (m.size == 2 ? m.exact_at(2, 2) : Rational(0));
                if (m.size == 1) {
                    critical = m.exact_at(1, 1) == Rational(1);
                    transient = Rational(1) < m.exact_at(1, 1);
                } else {
                    critical = sign == 0 && trace <= Rational(2);
                    transient = sign < 0 || (Rational(2) < trace);
                }
            } else if (sign == 0 && std::abs(result.spectral_radius - 1.0) <= 1e-6) {
                critical = true;
                transient = false;
            }
        } catch (const std::overflow_error&) {
        }
    }
    result.critical = critical;
    result.verdict = transient ? Verdict::Transient : Verdict::Recurrent;
    return result;
}

std::vector<double> escape_probabilities(const BaseGraph& graph, double tol,
                                         std::int64_t max_iters) {
    const auto report = graph.validate();
    if (!report.ok) throw std::invalid_argument("escape_probabilities requires a valid graph");
    const auto d = graph.adjacency_matrix();
    const int m = graph.type_count();
    std::vector<double> a(static_cast<std::size_t>(m), 1.0);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t it = 0; it < max_iters; ++it) {
        double change = 0.0;
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < m; ++j) {
                s += static_cast<double>(d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                     a[static_cast<std::size_t>(j)];
            }
            b[static_cast<std::size_t>(i)] = 1.0 - 1.0 / (1.0 + s);
            change = std::max(change,
                              std::abs(b[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)]));
        }
        std::swap(a, b);
        if (change < tol) return a;
    }
    throw NumericError("escape probability iteration did not converge", a);
}

double escape_fixed_point_residual(const BaseGraph& graph, std::span<const double> a) {
    const auto d = graph.adjacency_matrix();
    const int m = graph.type_count();
    double residual = 0.0;
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
            s += static_cast<double>(d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                 a[static_cast<std::size_t>(j)];
        }
        residual = std::max(residual, std::abs(a[static_cast<std::size_t>(i)] - (1.0 - 1.0 / (1.0 + s))));
    }
    return residual;
}

std::vector<std::vector<BigUint>> level_counts(const BaseGraph& graph, int level) {
    if (level < 0) throw std::invalid_argument("level must be nonnegative");
    const int m = graph.type_count();
    const auto d = graph.adjacency_matrix();
    // Identity, then repeated multiplication by D.
    std::vector<std::vector<BigUint>> w(static_cast<std::size_t>(m),
                                        std::vector<BigUint>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    for (int step = 0; step < level; ++step) {
        std::vector<std::vector<BigUint>> next(static_cast<std::size_t>(m),
                                               std::vector<BigUint>(static_cast<std::size_t>(m)));
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k) {
                const BigUint& wik = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                if (wik.is_zero()) continue;
                for (int j = 0; j < m; ++j) {
                    const auto dkj = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                    if (dkj == 0) continue;
                    next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        wik * BigUint(static_cast<std::uint64_t>(dkj));
                }
            }
        }
        w = std::move(next);
    }
    return w;
}

BigUint level_total(const BaseGraph& graph, int root_type, int level) {
    const auto w = level_counts(graph, level);
    if (root_type < 1 || root_type > graph.type_count()) throw std::out_of_range("root type");
    BigUint total;
    for (const auto& entry : w[static_cast<std::size_t>(root_type - 1)]) total += entry;
    return total;
}

std::vector<double> extinction_by_depth(const OffspringLaw& law, int depth) {
    const int m = law.type_count();
    std::vector<double> q(static_cast<std::size_t>(m), 0.0);
    for (int t = 0; t < depth; ++t) {
        std::vector<double> next(static_cast<std::size_t>(m));
        for (int i = 1; i <= m; ++i) {
            next[static_cast<std::size_t>(i - 1)] = pgf_eval(law, i, q);
        }
        q = std::move(next);
    }
    return q;
}

std::vector<Rational> extinction_by_depth_exact(const OffspringLaw& law, int depth) {
    const int m = law.type_count();
    std::vector<Rational> q(static_cast<std::size_t>(m), Rational(0));
    for (int t = 0; t < depth; ++t) {
        std::vector<Rational> next(static_cast<std::size_t>(m));
        for (int i = 1; i <= m; ++i) {
            next[static_cast<std::size_t>(i - 1)] = pgf_eval_exact(law, i, q);
        }
        q = std::move(next);
    }
    return q;
}

namespace {

constexpr std::int64_t kGenerationCap = 1000000;

// One replica of the branching process started from a single type-i
// individual; returns true when generation `depth` is nonempty. Hitting the
// generation cap counts as survival.
bool mbp_replica(const OffspringLaw& law, const std::vector<std::vector<double>>& cdfs, int root_type,
                 int depth, Rng& rng) {
    const int m = law.type_count();
    std::vector<std::int64_t> population(static_cast<std::size_t>(m), 0);
    population[static_cast<std::size_t>(root_type - 1)] = 1;
    for (int gen = 0; gen < depth; ++gen) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(m), 0);
        for (int i = 1; i <= m; ++i) {
            const auto& atoms = law.atoms(i);
            const auto& cdf = cdfs[static_cast<std::size_t>(i - 1)];
            for (std::int64_t n = 0; n < population[static_cast<std::size_t>(i - 1)]; ++n) {
                const double u = rng.uniform();
                std::size_t a = 0;
                while (a + 1 < cdf.size() && u >= cdf[a]) ++a;
                for (int j = 0; j < m; ++j) {
                    next[static_cast<std::size_t>(j)] += atoms[a].counts[static_cast<std::size_t>(j)];
                }
            }
        }
        std::int64_t total = 0;
        for (auto c : next) total += c;
        if (total == 0) return false;
        if (total > kGenerationCap) return true;
        population = std::move(next);
    }
    return true;
}

}  // namespace

MbpSurvivalEstimate mbp_survival_estimate(const BaseGraph& graph,
                                          const RotorDistributionFamily& dists, int depth,
                                          std::int64_t samples, std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto law = offspring_law(graph, dists);
    const int m = graph.type_count();
    std::vector<std::vector<double>> cdfs(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        double acc = 0.0;
        for (const auto& atom : law.atoms(i)) {
            acc += atom.probability;
            cdfs[static_cast<std::size_t>(i - 1)].push_back(acc);
        }
    }
    MbpSurvivalEstimate estimate;
    estimate.depth = depth;
    estimate.samples = samples;
    estimate.seed = seed;
    for (int i = 1; i <= m; ++i) {
        std::int64_t survivors = 0;
        for (std::int64_t r = 0; r < samples; ++r) {
            Rng rng(seed, static_cast<std::uint64_t>(i - 1) * static_cast<std::uint64_t>(samples) +
                              static_cast<std::uint64_t>(r));
            if (mbp_replica(law, cdfs, i, depth, rng)) ++survivors;
        }
        const double p = static_cast<double>(survivors) / static_cast<double>(samples);
        estimate.survival.push_back(p);
        estimate.half_width.push_back(1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)));
    }
    return estimate;
}

}  // namespace rrcover
