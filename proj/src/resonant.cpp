#include "diolab/resonant.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

#include "diolab/util.hpp"

namespace diolab {

namespace mp = boost::multiprecision;
using mp::cpp_int;
using mp::cpp_rational;

namespace {

// Split theta into integer part (folded into p) and fractional part in [0,1).
// Subtracting the floor is exact for doubles, so results are invariant under
// exactly-representable integer shifts of theta.
struct CanonTheta {
    double frac = 0.0;
    std::int64_t shift = 0;
};

CanonTheta canonicalize(double theta) {
    double fl = std::floor(theta);
    CanonTheta c;
    c.frac = theta - fl;
    if (c.frac >= 1.0) {  // theta just below an integer rounding up
        c.frac = 0.0;
        fl += 1.0;
    }
    c.shift = static_cast<std::int64_t>(fl);
    return c;
}

cpp_rational rational_of(double x) {
    // exact: every finite double is a dyadic rational
    int exp2 = 0;
    double m = std::frexp(x, &exp2);
    cpp_int num = static_cast<long long>(std::ldexp(m, 53));
    exp2 -= 53;
    if (exp2 >= 0) return cpp_rational(num << exp2, 1);
    return cpp_rational(num, cpp_int(1) << (-exp2));
}

cpp_rational rational_of(const Rational& r) {
    if (r.den == 0) throw std::invalid_argument("Rational: zero denominator");
    return cpp_rational(r.num, r.den);
}

cpp_int floor_rat(const cpp_rational& v) {
    cpp_int t = static_cast<cpp_int>(mp::numerator(v) / mp::denominator(v));
    if (v < 0 && cpp_rational(t) != v) --t;  // integer division truncates toward zero
    return t;
}

cpp_int ceil_rat(const cpp_rational& v) { return -floor_rat(-v); }

cpp_int nearest_int_rational(const cpp_rational& v) { return floor_rat(v + cpp_rational(1, 2)); }

}  // namespace

// ---------------------------------------------------------------------------
// Floating-point kernel
// ---------------------------------------------------------------------------

namespace {

struct FloatKernel {
    const Curve& curve;
    Interval J;
    double t1, t2;  // canonical fractional thetas
    double tau;

    // candidate p1 range for x = (p1 + t1)/q in J (closed window); the
    // membership predicate itself is authoritative, ceil/floor just seed it
    void p1_range(std::int64_t q, std::int64_t& lo, std::int64_t& hi) const {
        double qd = static_cast<double>(q);
        lo = static_cast<std::int64_t>(std::ceil(qd * J.lo - t1));
        hi = static_cast<std::int64_t>(std::floor(qd * J.hi - t1));
        while ((static_cast<double>(lo) + t1) / qd < J.lo) ++lo;
        while ((static_cast<double>(lo - 1) + t1) / qd >= J.lo) --lo;
        while ((static_cast<double>(hi) + t1) / qd > J.hi) --hi;
        while ((static_cast<double>(hi + 1) + t1) / qd <= J.hi) ++hi;
    }

    // residual and minimizing p2 at x = (p1 + t1)/q
    bool point(std::int64_t q, std::int64_t p1, double thr, ResonantPoint& out) const {
        double qd = static_cast<double>(q);
        double x = (static_cast<double>(p1) + t1) / qd;
        double y = curve.eval(x);
        if (!std::isfinite(y)) throw std::domain_error("enumerate: curve value not finite on window");
        double target = qd * y - t2;
        std::int64_t p2 = nearest_int(target);
        double residual = std::fabs(y - (static_cast<double>(p2) + t2) / qd);
        if (!(residual < thr - tau)) return false;
        out = ResonantPoint{p1, p2, q, x, residual};
        return true;
    }
};

// Exact-rational kernel: only for polynomial families, tau = 0, strict
// comparisons decided in Q.
struct ExactKernel {
    std::vector<cpp_rational> coeffs;  // highest degree first
    Interval J;
    cpp_rational t1, t2;
    cpp_rational j_lo, j_hi;

    ExactKernel(const Curve& curve, Interval window, cpp_rational th1, cpp_rational th2)
        : J(window), t1(std::move(th1)), t2(std::move(th2)) {
        switch (curve.family()) {
            case Curve::Family::Parabola:
                coeffs = {cpp_rational(1), cpp_rational(0), cpp_rational(0)};
                break;
            case Curve::Family::Cubic:
                coeffs = {cpp_rational(1), cpp_rational(0), cpp_rational(0), cpp_rational(0)};
                break;
            default:
                throw std::invalid_argument(
                    "ExactRational policy supports parabola and cubic curves");
        }
        j_lo = rational_of(window.lo);
        j_hi = rational_of(window.hi);
    }

    cpp_rational f(const cpp_rational& x) const {
        cpp_rational acc = 0;
        for (const auto& c : coeffs) acc = acc * x + c;
        return acc;
    }

    void p1_range(std::int64_t q, std::int64_t& lo, std::int64_t& hi) const {
        // p1 >= q*J.lo - t1, p1 <= q*J.hi - t1, decided exactly
        lo = ceil_rat(cpp_rational(q) * j_lo - t1).convert_to<std::int64_t>();
        hi = floor_rat(cpp_rational(q) * j_hi - t1).convert_to<std::int64_t>();
    }

    bool point(std::int64_t q, std::int64_t p1, const cpp_rational& thr, ResonantPoint& out) const {
        cpp_rational x = (cpp_rational(p1) + t1) / q;
        cpp_rational y = f(x);
        cpp_rational target = cpp_rational(q) * y - t2;
        cpp_int p2i = nearest_int_rational(target);
        cpp_rational residual = y - (cpp_rational(p2i) + t2) / q;
        if (residual < 0) residual = -residual;
        if (!(residual < thr)) return false;
        out.p1 = p1;
        out.p2 = p2i.convert_to<std::int64_t>();
        out.q = q;
        out.x = x.convert_to<double>();
        out.residual = residual.convert_to<double>();
        return true;
    }
};

std::int64_t q_lower_exclusive(const ShiftedQuery& query) {
    switch (query.mode) {
        case RangeMode::Half:
            return query.Q / 2;
        case RangeMode::OverU: {
            if (!(query.u_of_Q > 0.0))
                throw std::invalid_argument("enumerate_AQ: OverU mode needs u_of_Q > 0");
            double v = static_cast<double>(query.Q) / query.u_of_Q;
            return static_cast<std::int64_t>(std::floor(v));
        }
        case RangeMode::All:
            return 0;
    }
    return 0;
}

}  // namespace

EnumerateResult enumerate_AQ(const ShiftedQuery& query) {
    if (query.Q < 1) throw std::invalid_argument("enumerate_AQ: Q must be >= 1");
    if (!query.window.valid()) throw std::invalid_argument("enumerate_AQ: empty window");
    Interval D = query.curve.domain();
    if (query.window.lo < D.lo - 1e-12 || query.window.hi > D.hi + 1e-12)
        throw std::invalid_argument("enumerate_AQ: window must lie inside the curve domain");

    EnumerateResult result;
    if (query.threshold.kind == Threshold::Kind::Fixed && query.threshold.value >= 0.5)
        result.warnings.push_back(
            "threshold >= 1/2: every p1 admits a p2, counts are trivial");
    if (query.threshold.kind == Threshold::Kind::DeltaPerQ && query.threshold.value >= 0.5)
        result.warnings.push_back("delta >= 1/2 makes the nearest-integer condition vacuous");

    std::int64_t q_lo = q_lower_exclusive(query) + 1;
    if (q_lo < 1) q_lo = 1;
    if (q_lo > query.Q) return result;

    auto c1 = canonicalize(query.theta1);
    auto c2 = canonicalize(query.theta2);

    if (query.policy == TolerancePolicy::ExactRational) {
        cpp_rational th1, th2;
        std::int64_t shift1 = 0, shift2 = 0;
        if (query.theta_exact) {
            th1 = rational_of(query.theta_exact->first);
            th2 = rational_of(query.theta_exact->second);
            // reduce to [0,1); the integer parts fold into p
            cpp_int f1 = floor_rat(th1), f2 = floor_rat(th2);
            th1 -= cpp_rational(f1);
            th2 -= cpp_rational(f2);
            shift1 = f1.convert_to<std::int64_t>();
            shift2 = f2.convert_to<std::int64_t>();
        } else {
            th1 = rational_of(c1.frac);
            th2 = rational_of(c2.frac);
            shift1 = c1.shift;
            shift2 = c2.shift;
        }
        ExactKernel kern(query.curve, query.window, th1, th2);
        for (std::int64_t q = q_lo; q <= query.Q; ++q) {
            std::int64_t plo, phi;
            kern.p1_range(q, plo, phi);
            cpp_rational thr = query.threshold.kind == Threshold::Kind::PsiOverQ
                                   ? rational_of(query.threshold.psi->eval(static_cast<double>(q))) / q
                               : query.threshold.kind == Threshold::Kind::DeltaPerQ
                                   ? rational_of(query.threshold.value) / q
                                   : rational_of(query.threshold.value);
            for (std::int64_t p1 = plo; p1 <= phi; ++p1) {
                ResonantPoint pt;
                if (kern.point(q, p1, thr, pt)) result.points.push_back(pt);
            }
        }
        for (auto& pt : result.points) {
            pt.p1 -= shift1;
            pt.p2 -= shift2;
        }
        return result;
    }
    {
        FloatKernel kern{query.curve, query.window, c1.frac, c2.frac, query.tau};
        std::int64_t n_q = query.Q - q_lo + 1;
        int chunks = std::max<int>(1, static_cast<int>(std::min<std::int64_t>(n_q, 64)));
        std::vector<std::vector<ResonantPoint>> per_chunk(static_cast<std::size_t>(chunks));
        parallel_chunks(q_lo, query.Q, query.threads, chunks,
                        [&](int chunk, std::int64_t lo, std::int64_t hi) {
                            auto& out = per_chunk[static_cast<std::size_t>(chunk)];
                            for (std::int64_t q = lo; q <= hi; ++q) {
                                std::int64_t plo, phi;
                                kern.p1_range(q, plo, phi);
                                double thr = query.threshold.at(q);
                                for (std::int64_t p1 = plo; p1 <= phi; ++p1) {
                                    ResonantPoint pt;
                                    if (kern.point(q, p1, thr, pt)) out.push_back(pt);
                                }
                            }
                        });
        for (auto& chunk : per_chunk)
            result.points.insert(result.points.end(), chunk.begin(), chunk.end());
    }

    // undo the theta canonicalization so reported numerators match the input
    if (query.policy == TolerancePolicy::StrictFloat && (c1.shift != 0 || c2.shift != 0)) {
        for (auto& pt : result.points) {
            pt.p1 -= c1.shift;
            pt.p2 -= c2.shift;
        }
    }
    return result;
}

std::int64_t count_N(const Curve& curve, Interval I, std::int64_t Q, double delta, double theta1,
                     double theta2, TolerancePolicy policy, double tau, int threads) {
    if (Q < 1) throw std::invalid_argument("count_N: Q must be >= 1");
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("count_N: delta must lie in (0, 1/2)");
    if (!I.valid()) throw std::invalid_argument("count_N: empty interval");

    if (policy == TolerancePolicy::ExactRational) {
        ShiftedQuery query;
        query.curve = curve;
        query.window = I;
        query.Q = Q;
        query.mode = RangeMode::All;
        query.threshold = Threshold::delta_per_q(delta);
        query.theta1 = theta1;
        query.theta2 = theta2;
        query.policy = policy;
        query.tau = 0.0;
        return static_cast<std::int64_t>(enumerate_AQ(query).points.size());
    }

    auto c1 = canonicalize(theta1);
    auto c2 = canonicalize(theta2);
    FloatKernel kern{curve, I, c1.frac, c2.frac, tau};

    int chunks = std::max<int>(1, static_cast<int>(std::min<std::int64_t>(Q, 256)));
    std::vector<std::int64_t> per_chunk(static_cast<std::size_t>(chunks), 0);
    parallel_chunks(std::int64_t{1}, Q, threads, chunks,
                    [&](int chunk, std::int64_t lo, std::int64_t hi) {
                        std::int64_t n = 0;
                        for (std::int64_t q = lo; q <= hi; ++q) {
                            std::int64_t plo, phi;
                            kern.p1_range(q, plo, phi);
                            double qd = static_cast<double>(q);
                            for (std::int64_t p1 = plo; p1 <= phi; ++p1) {
                                double x = (static_cast<double>(p1) + c1.frac) / qd;
                                double y = curve.eval(x);
                                if (!std::isfinite(y))
                                    throw std::domain_error("count_N: curve value not finite");
                                if (dist_to_nearest_int(qd * y - c2.frac) < delta - tau) ++n;
                            }
                        }
                        per_chunk[static_cast<std::size_t>(chunk)] = n;
                    });
    std::int64_t total = 0;
    for (std::int64_t n : per_chunk) total += n;
    return total;
}

std::int64_t brute_force_oracle(const Curve& curve, Interval I, std::int64_t Q, double delta,
                                double theta1, double theta2, double tau) {
    if (Q > 512) throw std::invalid_argument("brute_force_oracle: refusing Q > 512");
    if (Q < 1) throw std::invalid_argument("brute_force_oracle: Q must be >= 1");
    if (!(delta > 0.0) || !(delta < 0.5))
        throw std::invalid_argument("brute_force_oracle: delta must lie in (0, 1/2)");
    if (!I.valid()) return 0;

    auto c1 = canonicalize(theta1);
    auto c2 = canonicalize(theta2);
    long double t1 = static_cast<long double>(c1.frac);
    long double t2 = static_cast<long double>(c2.frac);

    std::int64_t count = 0;
    for (std::int64_t q = 1; q <= Q; ++q) {
        long double qd = static_cast<long double>(q);
        // generous a-range, membership tested explicitly
        std::int64_t a_lo = static_cast<std::int64_t>(std::floor(q * I.lo - c1.frac)) - 2;
        std::int64_t a_hi = static_cast<std::int64_t>(std::ceil(q * I.hi - c1.frac)) + 2;
        for (std::int64_t a = a_lo; a <= a_hi; ++a) {
            long double x = (static_cast<long double>(a) + t1) / qd;
            // window membership decided at double precision, matching the
            // production predicate; the residual path stays extended
            double xd = (static_cast<double>(a) + c1.frac) / static_cast<double>(q);
            if (!(xd >= I.lo && xd <= I.hi)) continue;
            long double y = curve.eval_ld(x);
            long double res = dist_to_nearest_int_ld(qd * y - t2);
            if (res < static_cast<long double>(delta) - static_cast<long double>(tau)) ++count;
        }
    }
    return count;
}

}  // namespace diolab
