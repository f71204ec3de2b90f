#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rrcover/base_graph.hpp"
#include "rrcover/big_uint.hpp"
#include "rrcover/distribution.hpp"
#include "rrcover/rational.hpp"

namespace rrcover {

// Offspring law of the good-children branching process. A type-i individual
// whose rotor lands in state k produces exactly the children of positions
// k+1..d_i; atoms whose per-type count vectors coincide are merged.
class OffspringLaw {
public:
    struct Atom {
        std::vector<int> counts;  // counts[j-1] = children of type j
        double probability = 0.0;
        Rational exact_probability;
    };

    OffspringLaw(int type_count, std::vector<std::vector<Atom>> atoms, bool exact)
        : type_count_(type_count), atoms_(std::move(atoms)), exact_(exact) {}

    int type_count() const { return type_count_; }
    bool exact() const { return exact_; }
    const std::vector<Atom>& atoms(int type) const;

private:
    int type_count_;
    std::vector<std::vector<Atom>> atoms_;
    bool exact_;
};

// First-moment matrix M with m_ij the expected number of good children of
// type j for a type-i parent. Doubles are always present; the rational values
// are carried along when the distribution family was exact.
struct MomentMatrix {
    int size = 0;
    std::vector<double> values;           // row-major
    std::vector<Rational> exact_values;   // row-major, empty unless exact
    bool exact = false;

    double at(int i, int j) const { return values[static_cast<std::size_t>((i - 1) * size + (j - 1))]; }
    const Rational& exact_at(int i, int j) const {
        return exact_values[static_cast<std::size_t>((i - 1) * size + (j - 1))];
    }
};

enum class Verdict { Recurrent, Transient };

struct ClassificationResult {
    double spectral_radius = 0.0;
    Verdict verdict = Verdict::Recurrent;
    bool critical = false;
    bool positive_regular = false;
    bool singular = false;
};

struct MbpSurvivalEstimate {
    int depth = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> survival;    // per root type
    std::vector<double> half_width;  // 95% binomial half-widths
};

// Number of good children of type j for a type-i vertex with rotor state k,
// i.e. occurrences of j at positions k+1..d_i of the child list.
int good_children_count(const BaseGraph& graph, int type_i, int type_j, int rotor_state);

OffspringLaw offspring_law(const BaseGraph& graph, const RotorDistributionFamily& dists);

// f^i(z) = sum over atoms of p * prod_j z_j^{s_j}; z must lie in [0,1]^m.
double pgf_eval(const OffspringLaw& law, int type, std::span<const double> z);
Rational pgf_eval_exact(const OffspringLaw& law, int type, std::span<const Rational> z);

MomentMatrix moment_matrix(const BaseGraph& graph, const RotorDistributionFamily& dists);

// Perron root. Closed form for size <= 2 (rel_tol ignored there); power
// iteration with Rayleigh-quotient stopping otherwise. Throws NumericError
// with the last iterate if the iteration cap is exceeded.
double spectral_radius(const MomentMatrix& m, double rel_tol = 1e-12);

// True when some power of the support pattern (exponent bounded by
// m^2 - 2m + 2) is entrywise positive.
bool positive_regular(const MomentMatrix& m);

// True when every supported atom of every type has exactly one child.
bool singular(const OffspringLaw& law);

ClassificationResult classify(const BaseGraph& graph, const RotorDistributionFamily& dists,
                              double criticality_tol = 1e-9);

// Maximal fixed point of a_i <- 1 - 1/(1 + sum_j d_ij a_j), reached by
// monotone decrease from a = 1. Stops when the sup-norm change drops below
// tol; throws NumericError with the last iterate if max_iters is exceeded.
std::vector<double> escape_probabilities(const BaseGraph& graph, double tol = 1e-12,
                                         std::int64_t max_iters = 1000000);

// sup_i |a_i - (1 - 1/(1 + sum_j d_ij a_j))|, for convergence reporting.
double escape_fixed_point_residual(const BaseGraph& graph, std::span<const double> a);

// w(n) = D^n; entry (i,j) counts type-j vertices on level n of a tree with
// root type i. Exact in big integers.
std::vector<std::vector<BigUint>> level_counts(const BaseGraph& graph, int level);

// Row sum of w(n): total population of level n under the given root type.
BigUint level_total(const BaseGraph& graph, int root_type, int level);

// Extinction-by-generation vector, q_i(depth) = P[Z_depth = 0 | Z_0 = e_i],
// computed by iterating the generating function from zero.
std::vector<double> extinction_by_depth(const OffspringLaw& law, int depth);
std::vector<Rational> extinction_by_depth_exact(const OffspringLaw& law, int depth);

// Monte Carlo estimate of P[Z_depth != 0] per root type. Generations are
// truncated at 10^6 individuals and count as survival. Deterministic in seed.
MbpSurvivalEstimate mbp_survival_estimate(const BaseGraph& graph,
                                          const RotorDistributionFamily& dists, int depth,
                                          std::int64_t samples, std::uint64_t seed);

}  // namespace rrcover
