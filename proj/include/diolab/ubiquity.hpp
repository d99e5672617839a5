#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diolab/curves.hpp"
#include "diolab/funcs.hpp"
#include "diolab/resonant.hpp"

namespace diolab {

class StaircaseIncomplete : public std::runtime_error {
public:
    StaircaseIncomplete(std::string what, int blocks)
        : std::runtime_error(std::move(what)), blocks_built(blocks) {}
    int blocks_built;
};

// Nondecreasing, unbounded weighting u used by the ubiquity function
// rho(t) = u(t) / (t^2 psi(t)).
class UFunc {
public:
    enum class Kind { Staircase, PartialSums, Log2 };

    // u(l) = i on the i-th block (l_{i-1}, l_i]; clamps to the last block
    // index beyond the constructed range.
    static UFunc staircase(std::vector<std::int64_t> boundaries);
    // u(q) = sum_{t=0}^{floor(q)} 2^t psi1(2^t) psi2(2^t); evaluation capped
    // at q = 2^20, saturating to +inf once the prefix exceeds 1e100.
    static UFunc partial_sums(ApproxFunc psi1, ApproxFunc psi2);
    // Neutral default log2(2 + t).
    static UFunc log2_default();

    double eval(double q) const;
    double operator()(double q) const { return eval(q); }
    Kind kind() const;
    // For PartialSums: whether the dyadic term sum shows divergence on the
    // probed range (the construction is only useful when it does).
    bool divergent_hint() const;
    std::string describe() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit UFunc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

struct StaircaseBuild {
    UFunc u;
    std::vector<std::int64_t> boundaries;  // l_1 < l_2 < ...
    int blocks = 0;
};

// Greedy block construction: each block sum of `term` exceeds 1; throws
// StaircaseIncomplete when the remaining tail cannot close the next block
// within the budget.
StaircaseBuild build_u_staircase(const std::function<double(std::int64_t)>& term,
                                 std::int64_t budget = 1'000'000);

UFunc build_u_partial_sums(const ApproxFunc& psi1, const ApproxFunc& psi2);

// The (beta, Phi, Psi, rho) wiring; beta is the weight (p, q) -> q and the
// dyadic base k is fixed to 2.
struct UbiquityWiring {
    ApproxFunc psi;   // drives Phi and rho
    ApproxFunc psi1;  // drives Psi
    UFunc u;
    static constexpr int k = 2;

    double Phi(double t) const { return psi.eval(t) / t; }
    double Psi(double t) const { return psi1.eval(t) / t; }
    double rho(double t) const { return u.eval(t) / (t * t * psi.eval(t)); }

    // Probes the wiring hypotheses at dyadic t up to t_max; returns warnings.
    std::vector<std::string> check(int t_max = 20) const;
};

struct CoverageReport {
    Interval J;
    std::int64_t Q = 0;
    double C = 1.0;
    double covered = 0.0;
    double fraction = 0.0;
    std::size_t points = 0;
    bool meets_half = false;
};

struct CoverageSweep {
    std::int64_t Q = 0;
    std::vector<CoverageReport> by_C;
    std::optional<double> minimal_C;  // smallest grid C with fraction >= 1/2
    double rho_radius = 0.0;          // u(Q)/(Q^2 psi(Q)) when u is supplied
    std::size_t points = 0;
};

// For each Q: enumerate A_Q(J, theta) (Half mode, threshold psi(Q)/Q), place
// closed balls of radius C/(Q^2 psi(Q)) for each C in the grid, merge, and
// report covered fractions of J.
std::vector<CoverageSweep> verify_local_ubiquity(const Curve& curve, Interval J,
                                                 const ApproxFunc& psi, double theta1,
                                                 double theta2, const UFunc* u,
                                                 const std::vector<std::int64_t>& Qs,
                                                 const std::vector<double>& C_grid,
                                                 std::vector<std::string>* warnings = nullptr,
                                                 int threads = 0);

// liminf surrogate: the minimum fraction over the tested Q beyond a burn-in,
// at fixed C.
std::optional<double> liminf_fraction(const std::vector<CoverageSweep>& sweeps, double C,
                                      int burn_in = 2);

}  // namespace diolab
