#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace diolab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool valid() const { return hi > lo; }
};

class DegenerateCurveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A planar curve given as the graph of a C^3 function on an interval, with
// exact first/second/third derivatives. Immutable; cheap to copy.
class Curve {
public:
    enum class Family { Parabola, Cubic, Polynomial, CircleArc, Exp, Sin, Inverse };

    static Curve parabola(Interval I);
    static Curve cubic(Interval I);
    // Coefficients highest degree first: poly(1,0,-2,0.5) = x^3 - 2x + 0.5.
    static Curve polynomial(std::vector<double> coeffs, Interval I);
    static Curve circle_arc(Interval I);  // sqrt(1 - x^2), I strictly inside (-1, 1)
    static Curve exponential(Interval I);
    static Curve sine(Interval I);

    // Inverse branch y -> f^{-1}(y) over a subinterval where f' keeps one
    // sign; derivatives come from the chain rule, evaluation from a closed
    // form where the family has one and bisection otherwise.
    Curve inverse_on(Interval monotone_piece) const;

    double eval(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;
    long double eval_ld(long double x) const;  // extended-precision path for oracles

    Interval domain() const;
    Family family() const;
    double sup_abs_d1() const;  // over the domain; >= any grid max
    // Zeros of f'' inside the domain (analytic for closed forms, isolated
    // roots for polynomials). Throws DegenerateCurveError when f'' vanishes
    // identically.
    std::vector<double> second_derivative_zeros() const;
    std::string describe() const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    explicit Curve(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// A subinterval on which 0 < c1 <= |f''| <= c2, with Hoelder data for f''
// and the constants the covering arguments consume.
struct CurvePiece {
    Interval I;
    double c1 = 0.0;           // inf |f''|
    double c2 = 0.0;           // sup |f''|
    double xi = 0.8;           // Hoelder exponent carried with the piece
    double lip_K = 0.0;        // |f''(x)-f''(y)| <= lip_K |x-y|^xi for |x-y| <= 1
    double sup_abs_d1 = 0.0;   // sup |f'| over the piece
    double c3 = 0.0;           // 1 + sup|f'|, the mean-value constant
};

struct Decomposition {
    std::vector<CurvePiece> pieces;
    double excluded_measure = 0.0;  // total length removed around f'' zeros
};

// Pieces cover the domain minus open `margin`-neighborhoods of every zero of
// f''; pieces longer than 1 are split. Throws DegenerateCurveError for
// segments with f'' identically zero.
Decomposition decompose_nondegenerate(const Curve& curve, double margin, double xi = 0.8);

// Midpoint of ((3*eta - 1)/(1 + eta), 1), or 0.8 when the lower bound is <= 0.
double select_xi(double eta);

// Maximal subintervals of `piece` on which |f'| is bounded away from zero;
// zeros of f' are excised with the given margin.
struct MonotonePiece {
    Interval I;
    int d1_sign = 0;           // sign of f' on the subinterval
    double d1_min_abs = 0.0;
    double d1_max_abs = 0.0;
};

std::vector<MonotonePiece> monotone_subpieces(const Curve& curve, const Interval& piece,
                                              double margin);

// parabola | cubic | poly(c_n,...,c_0) | circle | exp | sin, with an optional
// interval override; each family has a default interval.
Curve parse_curve_expr(const std::string& expr, std::optional<Interval> interval = std::nullopt);

}  // namespace diolab
