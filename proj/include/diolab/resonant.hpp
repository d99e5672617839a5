#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diolab/curves.hpp"
#include "diolab/funcs.hpp"

namespace diolab {

// Default exclusion tolerance for strict float inequalities: a point within
// tau of the boundary is dropped, deterministically.
inline constexpr double kStrictTau = 1e-12;

// A theta-shifted rational point near the curve: x = (p1 + theta1)/q with
// residual |f(x) - (p2 + theta2)/q|, weight q.
struct ResonantPoint {
    std::int64_t p1 = 0;
    std::int64_t p2 = 0;
    std::int64_t q = 1;
    double x = 0.0;
    double residual = 0.0;
    std::int64_t weight() const { return q; }
};

enum class RangeMode {
    Half,   // Q/2 < q <= Q
    OverU,  // Q/u(Q) < q <= Q
    All,    // 1 <= q <= Q
};

enum class TolerancePolicy { StrictFloat, ExactRational };

struct Rational {
    long long num = 0;
    long long den = 1;
};

// Residual threshold: a fixed value (psi(Q)/Q style), delta/q, or psi(q)/q.
struct Threshold {
    enum class Kind { Fixed, DeltaPerQ, PsiOverQ };
    Kind kind = Kind::Fixed;
    double value = 0.0;
    std::optional<ApproxFunc> psi;

    static Threshold fixed(double v) { return {Kind::Fixed, v, std::nullopt}; }
    static Threshold delta_per_q(double d) { return {Kind::DeltaPerQ, d, std::nullopt}; }
    static Threshold psi_over_q(ApproxFunc f) { return {Kind::PsiOverQ, 0.0, std::move(f)}; }

    double at(std::int64_t q) const {
        switch (kind) {
            case Kind::Fixed: return value;
            case Kind::DeltaPerQ: return value / static_cast<double>(q);
            case Kind::PsiOverQ: return psi->eval(static_cast<double>(q)) / static_cast<double>(q);
        }
        return 0.0;
    }
};

struct ShiftedQuery {
    Curve curve;
    Interval window;            // J, must lie inside the curve domain
    std::int64_t Q = 1;
    RangeMode mode = RangeMode::Half;
    double u_of_Q = 0.0;        // used by OverU
    Threshold threshold = Threshold::fixed(0.0);
    double theta1 = 0.0;
    double theta2 = 0.0;
    TolerancePolicy policy = TolerancePolicy::StrictFloat;
    double tau = kStrictTau;
    int threads = 0;            // 0 = hardware default
    // Exact theta for the ExactRational policy; otherwise the double thetas
    // are taken exactly (every double is a dyadic rational).
    std::optional<std::pair<Rational, Rational>> theta_exact;
};

struct EnumerateResult {
    std::vector<ResonantPoint> points;  // sorted by (q, p1); deterministic
    std::vector<std::string> warnings;
};

// All (p1, p2, q) in the q-range with (p1+theta1)/q in J and
// |f((p1+theta1)/q) - (p2+theta2)/q| < threshold(q); p2 is the residual-
// minimizing integer. Integer parts of theta are folded into p, so integer
// shifts of theta change nothing but the reported p values.
EnumerateResult enumerate_AQ(const ShiftedQuery& query);

// #{(a, q) : q <= Q, (a+theta1)/q in I, ||q f((a+theta1)/q) - theta2|| < delta}.
// Requires 0 < delta < 1/2.
std::int64_t count_N(const Curve& curve, Interval I, std::int64_t Q, double delta, double theta1,
                     double theta2, TolerancePolicy policy = TolerancePolicy::StrictFloat,
                     double tau = kStrictTau, int threads = 0);

// Independent exhaustive recount (no early exits, no parallelism, long double
// accumulation); refuses Q > 512.
std::int64_t brute_force_oracle(const Curve& curve, Interval I, std::int64_t Q, double delta,
                                double theta1, double theta2, double tau = kStrictTau);

}  // namespace diolab
