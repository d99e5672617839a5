#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace diolab {

// Comparison tolerance used for construction-time tie checks (table
// monotonicity and the like). Strict runtime inequalities carry their own
// tolerance policy.
inline constexpr double kTieTol = 1e-12;

// Asymptotic shape c * q^{-v} * (ln q)^{-a} of a closed-form approximating
// function, or c * r^{s} * L(r)^{a} (L = max(1, ln 1/r)) for a dimension
// function; used by the exponent-comparison series classifiers.
struct AsymptoticPower {
    double v = 0.0;  // power exponent (decay for psi, growth for h)
    double a = 0.0;  // log exponent
    double c = 1.0;  // leading coefficient
};

// ---------------------------------------------------------------------------
// Approximating functions: monotone nonincreasing psi : N -> R+, closed-form
// families plus tabulated data. Values are immutable after construction and
// evaluation is pure, so instances can be shared freely across threads.
// ---------------------------------------------------------------------------

class ApproxFunc {
public:
    enum class Kind { Power, PowerLog, Table, Scaled, FlooredMax, MinOf, MaxOf, Slowdown };

    // c * q^{-v}, v > 0, c > 0.
    static ApproxFunc power(double v, double c = 1.0);
    // c * q^{-v} * (ln q)^{-a}; ln clamped below at ln 2 so q = 1 stays positive.
    static ApproxFunc power_log(double v, double a, double c = 1.0);
    // Explicit (q, value) rows with strictly increasing q; step lookup,
    // constant extension beyond the last row.
    static ApproxFunc table(std::vector<std::pair<double, double>> rows);
    static ApproxFunc table_from_csv(const std::string& path);
    static ApproxFunc scaled(const ApproxFunc& base, double factor);
    // q -> max{base(q), q^{-e}}.
    static ApproxFunc floored_max(const ApproxFunc& base, double floor_exponent);
    static ApproxFunc min_of(const ApproxFunc& a, const ApproxFunc& b);
    static ApproxFunc max_of(const ApproxFunc& a, const ApproxFunc& b);

    double eval(double q) const;
    double operator()(std::int64_t q) const { return eval(static_cast<double>(q)); }

    Kind kind() const;
    // Present for closed-form compositions; empty when a table (or a
    // partial-sum slowdown) is anywhere in the tree.
    std::optional<AsymptoticPower> asymptotic() const;
    // Largest tabulated q among table nodes, if any table is involved.
    std::optional<double> table_limit() const;
    std::string describe() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit ApproxFunc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    friend std::pair<ApproxFunc, ApproxFunc> slowdown_by_partial_sums(const ApproxFunc&,
                                                                      const ApproxFunc&);
};

// (pointwise min, pointwise max); min*max == psi*phi pointwise.
std::pair<ApproxFunc, ApproxFunc> reduce_min_max(const ApproxFunc& psi, const ApproxFunc& phi);

ApproxFunc floor_modify(const ApproxFunc& psi, double floor_exponent);

// psi_i(q) / sqrt(v(q)) with v(q) = sum_{t<=q} psi1(t)*psi2(t). Both outputs
// share one memoized prefix-sum state; evaluation is capped at q = 2^22.
std::pair<ApproxFunc, ApproxFunc> slowdown_by_partial_sums(const ApproxFunc& psi1,
                                                           const ApproxFunc& psi2);

// ---------------------------------------------------------------------------
// Dimension functions h : R+ -> R+, increasing, h(r) -> 0 as r -> 0.
// ---------------------------------------------------------------------------

class DimFunc {
public:
    enum class Kind { Power, PowerLog, Identity, Table };

    // r^s, s in (0, 1].
    static DimFunc power(double s);
    // r^s * L(r)^a with L(r) = max(1, ln(1/r)); a may be negative.
    static DimFunc power_log(double s, double a);
    static DimFunc identity();
    // (r, value) rows, strictly increasing in both; linear interpolation,
    // linear decay to 0 below the first row, constant above the last.
    static DimFunc table(std::vector<std::pair<double, double>> rows);
    static DimFunc table_from_csv(const std::string& path);

    double eval(double r) const;
    double operator()(double r) const { return eval(r); }

    Kind kind() const;
    std::optional<AsymptoticPower> asymptotic() const;  // {s, a, 1}
    std::string describe() const;

    // Optional regularity witness (r0, lambda1, lambda2), each in (0,1).
    struct Witness { double r0, lambda1, lambda2; };
    DimFunc with_witness(Witness w) const;
    std::optional<Witness> witness() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit DimFunc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// Report on the hypotheses the Hausdorff classifier needs from h:
// r^{-1} h(r) nonincreasing in r and unbounded as r -> 0. Decided analytically
// for closed forms, from the probe grid for tables. h(r) = r fails.
struct AdmissibilityReport {
    bool admissible = false;
    bool monotone_ok = false;
    bool unbounded_ok = false;
    bool analytic = false;
    std::string reason;
};

AdmissibilityReport check_t04_admissible(const DimFunc& h, const std::vector<double>& grid);

// Regularity probe: sup over the grid of h(lambda1*r)/h(r); holds iff < 1.
struct RegularityResult {
    bool holds = false;
    double lambda2 = 1.0;        // the supremum found
    double worst_r = 0.0;        // arg sup; a counterexample when !holds
};

RegularityResult check_regular(const DimFunc& h, double lambda1, const std::vector<double>& grid);

// Decreasing geometric probe grid r0, r0*ratio, ... (n points).
std::vector<double> geometric_grid(double r0, double ratio, int n);

// Text expressions: pow(v=0.6[,c=1]) | powlog(v=1,a=1[,c=1]) | table(path) |
// scale(f,k=0.5) | floor(f,e=0.6667) | min(f,g) | max(f,g).
ApproxFunc parse_approx_expr(const std::string& expr);

// pow(s=0.9) | powlog(s=0.9,a=1) | identity | table(path).
DimFunc parse_dim_expr(const std::string& expr);

}  // namespace diolab
