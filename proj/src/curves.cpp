#include "diolab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace diolab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> differentiate(const std::vector<double>& coeffs) {
    // coeffs highest degree first
    std::size_t n = coeffs.size();
    if (n <= 1) return {0.0};
    std::vector<double> out(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        out[i] = coeffs[i] * static_cast<double>(n - 1 - i);
    return out;
}

double horner(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (double c : coeffs) acc = acc * x + c;
    return acc;
}

long double horner_ld(const std::vector<double>& coeffs, long double x) {
    long double acc = 0.0L;
    for (double c : coeffs) acc = acc * x + static_cast<long double>(c);
    return acc;
}

bool essentially_zero_poly(const std::vector<double>& coeffs) {
    for (double c : coeffs)
        if (c != 0.0) return false;
    return true;
}

// Sign-change scan plus bisection; good enough for the smooth closed forms
// this catalog carries.
std::vector<double> isolate_roots(const std::vector<double>& coeffs, Interval I) {
    std::vector<double> roots;
    const int grid = 20000;
    double step = I.length() / grid;
    double prev_x = I.lo;
    double prev_v = horner(coeffs, prev_x);
    for (int i = 1; i <= grid; ++i) {
        double x = (i == grid) ? I.hi : I.lo + step * i;
        double v = horner(coeffs, x);
        if (prev_v == 0.0) {
            roots.push_back(prev_x);
        } else if (v != 0.0 && std::signbit(v) != std::signbit(prev_v)) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++it) {
                double m = 0.5 * (a + b);
                double fm = horner(coeffs, m);
                if (fm == 0.0) { a = b = m; break; }
                if (std::signbit(fm) == std::signbit(horner(coeffs, a)))
                    a = m;
                else
                    b = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    if (prev_v == 0.0) roots.push_back(I.hi);
    // dedupe near-coincident roots from grid boundaries
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return b - a < 1e-10 * std::max(1.0, I.length()); }),
                roots.end());
    return roots;
}

}  // namespace

// ---------------------------------------------------------------------------
// Curve implementation
// ---------------------------------------------------------------------------

struct Curve::Impl {
    Family family;
    Interval I;
    std::vector<double> c0, c1p, c2p, c3p;  // polynomial ladders, highest degree first

    // inverse branches
    std::shared_ptr<const Impl> base;
    Interval branch;         // x-interval of the base on which f is monotone
    bool increasing = true;  // sign of base f' on the branch

    double f(double x) const {
        switch (family) {
            case Family::Parabola: return x * x;
            case Family::Cubic: return x * x * x;
            case Family::Polynomial: return horner(c0, x);
            case Family::CircleArc: return std::sqrt(1.0 - x * x);
            case Family::Exp: return std::exp(x);
            case Family::Sin: return std::sin(x);
            case Family::Inverse: return inv(x);
        }
        return 0.0;
    }

    long double f_ld(long double x) const {
        switch (family) {
            case Family::Parabola: return x * x;
            case Family::Cubic: return x * x * x;
            case Family::Polynomial: return horner_ld(c0, x);
            case Family::CircleArc: return sqrtl(1.0L - x * x);
            case Family::Exp: return expl(x);
            case Family::Sin: return sinl(x);
            case Family::Inverse: return static_cast<long double>(inv(static_cast<double>(x)));
        }
        return 0.0L;
    }

    double fp(double x) const {
        switch (family) {
            case Family::Parabola: return 2.0 * x;
            case Family::Cubic: return 3.0 * x * x;
            case Family::Polynomial: return horner(c1p, x);
            case Family::CircleArc: return -x / std::sqrt(1.0 - x * x);
            case Family::Exp: return std::exp(x);
            case Family::Sin: return std::cos(x);
            case Family::Inverse: return 1.0 / base->fp(inv(x));
        }
        return 0.0;
    }

    double fpp(double x) const {
        switch (family) {
            case Family::Parabola: return 2.0;
            case Family::Cubic: return 6.0 * x;
            case Family::Polynomial: return horner(c2p, x);
            case Family::CircleArc: return -std::pow(1.0 - x * x, -1.5);
            case Family::Exp: return std::exp(x);
            case Family::Sin: return -std::sin(x);
            case Family::Inverse: {
                double g = inv(x);
                double d = base->fp(g);
                return -base->fpp(g) / (d * d * d);
            }
        }
        return 0.0;
    }

    double fppp(double x) const {
        switch (family) {
            case Family::Parabola: return 0.0;
            case Family::Cubic: return 6.0;
            case Family::Polynomial: return horner(c3p, x);
            case Family::CircleArc: return -3.0 * x * std::pow(1.0 - x * x, -2.5);
            case Family::Exp: return std::exp(x);
            case Family::Sin: return -std::cos(x);
            case Family::Inverse: {
                double g = inv(x);
                double d = base->fp(g);
                double dd = base->fpp(g);
                double ddd = base->fppp(g);
                return (3.0 * dd * dd - d * ddd) / std::pow(d, 5.0);
            }
        }
        return 0.0;
    }

    // f^{-1}(y) on the stored monotone branch of the base curve.
    double inv(double y) const {
        switch (base->family) {
            case Family::Parabola: {
                double r = std::sqrt(std::max(y, 0.0));
                return branch.lo >= 0.0 ? r : -r;
            }
            case Family::Cubic: return std::cbrt(y);
            case Family::Exp: return std::log(y);
            case Family::CircleArc: {
                double r = std::sqrt(std::max(1.0 - y * y, 0.0));
                return branch.lo >= 0.0 ? r : -r;
            }
            default: break;
        }
        // generic monotone bisection on the branch
        double a = branch.lo, b = branch.hi;
        double fa = base->f(a);
        bool inc = increasing;
        if (y <= std::min(fa, base->f(b))) return inc ? a : b;
        if (y >= std::max(fa, base->f(b))) return inc ? b : a;
        for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
            double m = 0.5 * (a + b);
            if ((base->f(m) < y) == inc)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    }
};

namespace {

std::shared_ptr<const Curve::Impl> make_impl(Curve::Family fam, Interval I,
                                             std::vector<double> coeffs = {}) {
    if (!I.valid()) throw std::invalid_argument("Curve: interval must satisfy lo < hi");
    auto impl = std::make_shared<Curve::Impl>();
    impl->family = fam;
    impl->I = I;
    if (fam == Curve::Family::CircleArc) {
        if (!(I.lo > -1.0 && I.hi < 1.0))
            throw std::invalid_argument("Curve::circle_arc: interval must lie strictly inside (-1, 1)");
    }
    if (fam == Curve::Family::Polynomial) {
        while (coeffs.size() > 1 && coeffs.front() == 0.0) coeffs.erase(coeffs.begin());
        if (coeffs.empty()) throw std::invalid_argument("Curve::polynomial: no coefficients");
        impl->c0 = coeffs;
        impl->c1p = differentiate(impl->c0);
        impl->c2p = differentiate(impl->c1p);
        impl->c3p = differentiate(impl->c2p);
    }
    return impl;
}

}  // namespace

Curve Curve::parabola(Interval I) { return Curve(make_impl(Family::Parabola, I)); }
Curve Curve::cubic(Interval I) { return Curve(make_impl(Family::Cubic, I)); }
Curve Curve::polynomial(std::vector<double> coeffs, Interval I) {
    return Curve(make_impl(Family::Polynomial, I, std::move(coeffs)));
}
Curve Curve::circle_arc(Interval I) { return Curve(make_impl(Family::CircleArc, I)); }
Curve Curve::exponential(Interval I) { return Curve(make_impl(Family::Exp, I)); }
Curve Curve::sine(Interval I) { return Curve(make_impl(Family::Sin, I)); }

Curve Curve::inverse_on(Interval piece) const {
    if (!piece.valid() || piece.lo < impl_->I.lo - 1e-12 || piece.hi > impl_->I.hi + 1e-12)
        throw std::invalid_argument("Curve::inverse_on: piece must lie inside the domain");
    double da = impl_->fp(piece.lo), db = impl_->fp(piece.hi);
    if (da == 0.0 || db == 0.0 || std::signbit(da) != std::signbit(db))
        throw std::invalid_argument("Curve::inverse_on: f' must keep one sign on the piece");
    auto impl = std::make_shared<Impl>();
    impl->family = Family::Inverse;
    impl->base = impl_;
    impl->branch = piece;
    impl->increasing = da > 0.0;
    double ya = impl_->f(piece.lo), yb = impl_->f(piece.hi);
    impl->I = Interval{std::min(ya, yb), std::max(ya, yb)};
    return Curve(impl);
}

double Curve::eval(double x) const { return impl_->f(x); }
double Curve::d1(double x) const { return impl_->fp(x); }
double Curve::d2(double x) const { return impl_->fpp(x); }
double Curve::d3(double x) const { return impl_->fppp(x); }
long double Curve::eval_ld(long double x) const { return impl_->f_ld(x); }
Interval Curve::domain() const { return impl_->I; }
Curve::Family Curve::family() const { return impl_->family; }

namespace {

// Grid extremum with a 1% safety factor; used when no closed-form bound
// applies.
double grid_sup_abs(const std::function<double(double)>& g, Interval I, int points = 20001) {
    double best = 0.0;
    for (int i = 0; i <= points; ++i) {
        double x = I.lo + (I.hi - I.lo) * (static_cast<double>(i) / points);
        best = std::max(best, std::fabs(g(x)));
    }
    return best * 1.01;
}

double grid_inf_abs(const std::function<double(double)>& g, Interval I, int points = 20001) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= points; ++i) {
        double x = I.lo + (I.hi - I.lo) * (static_cast<double>(i) / points);
        best = std::min(best, std::fabs(g(x)));
    }
    return best * 0.99;
}

}  // namespace

double Curve::sup_abs_d1() const {
    const Interval I = impl_->I;
    switch (impl_->family) {
        case Family::Parabola:
        case Family::Cubic:
        case Family::Exp:
        case Family::CircleArc:
            // |f'| monotone in |x| (or in x) for these families
            return std::max(std::fabs(impl_->fp(I.lo)), std::fabs(impl_->fp(I.hi)));
        case Family::Sin: {
            // |cos| peaks at multiples of pi
            double best = std::max(std::fabs(std::cos(I.lo)), std::fabs(std::cos(I.hi)));
            double k = std::ceil(I.lo / kPi);
            for (; k * kPi <= I.hi; k += 1.0) best = std::max(best, 1.0);
            return best;
        }
        default:
            return grid_sup_abs([this](double x) { return impl_->fp(x); }, I);
    }
}

std::vector<double> Curve::second_derivative_zeros() const {
    const Interval I = impl_->I;
    switch (impl_->family) {
        case Family::Parabola:
        case Family::CircleArc:
        case Family::Exp:
            return {};
        case Family::Cubic:
            return I.contains(0.0) ? std::vector<double>{0.0} : std::vector<double>{};
        case Family::Sin: {
            std::vector<double> zeros;
            for (double k = std::ceil(I.lo / kPi); k * kPi <= I.hi; k += 1.0)
                zeros.push_back(k * kPi);
            return zeros;
        }
        case Family::Polynomial: {
            if (essentially_zero_poly(impl_->c2p))
                throw DegenerateCurveError("polynomial has f'' identically zero (line segment)");
            return isolate_roots(impl_->c2p, I);
        }
        case Family::Inverse:
            // g'' = -f''(g)/f'(g)^3 and the base branch excludes f'' zeros
            return {};
    }
    return {};
}

std::string Curve::describe() const {
    std::ostringstream os;
    switch (impl_->family) {
        case Family::Parabola: os << "parabola"; break;
        case Family::Cubic: os << "cubic"; break;
        case Family::Polynomial: {
            os << "poly(";
            for (std::size_t i = 0; i < impl_->c0.size(); ++i)
                os << (i ? "," : "") << impl_->c0[i];
            os << ")";
            break;
        }
        case Family::CircleArc: os << "circle"; break;
        case Family::Exp: os << "exp"; break;
        case Family::Sin: os << "sin"; break;
        case Family::Inverse: os << "inverse(" << Curve(impl_->base).describe() << ")"; break;
    }
    os << " on [" << impl_->I.lo << "," << impl_->I.hi << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// Non-degeneracy decomposition
// ---------------------------------------------------------------------------

namespace {

// Exact |f''| extrema where the family allows it, grid extrema with a safety
// factor otherwise. Candidate interior critical points cover the closed
// forms in the catalog.
std::pair<double, double> d2_abs_range(const Curve& c, Interval I) {
    std::vector<double> candidates{I.lo, I.hi};
    switch (c.family()) {
        case Curve::Family::Parabola:
            return {2.0, 2.0};
        case Curve::Family::Cubic:
        case Curve::Family::Exp:
            break;  // |f''| monotone: endpoints suffice
        case Curve::Family::CircleArc:
            if (I.contains(0.0)) candidates.push_back(0.0);  // |f''| minimal at 0
            break;
        case Curve::Family::Sin: {
            // |sin| extremal at k*pi/2
            for (double k = std::ceil(I.lo / (kPi / 2)); k * (kPi / 2) <= I.hi; k += 1.0)
                candidates.push_back(k * (kPi / 2));
            break;
        }
        default: {
            double lo = grid_inf_abs([&](double x) { return c.d2(x); }, I);
            double hi = grid_sup_abs([&](double x) { return c.d2(x); }, I);
            return {lo, hi};
        }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : candidates) {
        double v = std::fabs(c.d2(x));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

CurvePiece make_piece(const Curve& c, Interval I, double xi) {
    CurvePiece p;
    p.I = I;
    auto [lo, hi] = d2_abs_range(c, I);
    p.c1 = lo;
    p.c2 = hi;
    p.xi = xi;
    p.lip_K = grid_sup_abs([&](double x) { return c.d3(x); }, I, 4001);
    switch (c.family()) {
        case Curve::Family::Parabola:
        case Curve::Family::Cubic:
        case Curve::Family::Exp:
        case Curve::Family::CircleArc:
            p.sup_abs_d1 = std::max(std::fabs(c.d1(I.lo)), std::fabs(c.d1(I.hi)));
            break;
        default:
            p.sup_abs_d1 = grid_sup_abs([&](double x) { return c.d1(x); }, I, 4001);
            break;
    }
    p.c3 = 1.0 + p.sup_abs_d1;
    return p;
}

}  // namespace

Decomposition decompose_nondegenerate(const Curve& curve, double margin, double xi) {
    if (!(margin > 0.0)) throw std::invalid_argument("decompose_nondegenerate: margin must be > 0");
    Interval I = curve.domain();
    std::vector<double> zeros = curve.second_derivative_zeros();  // may throw DegenerateCurveError

    Decomposition out;
    std::vector<Interval> kept;
    double cursor = I.lo;
    for (double z : zeros) {
        double cut_lo = z - margin, cut_hi = z + margin;
        if (cut_hi <= cursor || cut_lo >= I.hi) continue;
        if (cut_lo > cursor) kept.push_back({cursor, cut_lo});
        out.excluded_measure +=
            std::max(0.0, std::min(cut_hi, I.hi) - std::max(std::max(cut_lo, I.lo), cursor));
        cursor = std::max(cursor, cut_hi);
    }
    if (cursor < I.hi) kept.push_back({cursor, I.hi});

    for (Interval piece : kept) {
        if (!(piece.length() > 0.0)) continue;
        int parts = static_cast<int>(std::ceil(piece.length()));
        double step = piece.length() / parts;
        for (int i = 0; i < parts; ++i) {
            Interval sub{piece.lo + i * step, (i == parts - 1) ? piece.hi : piece.lo + (i + 1) * step};
            out.pieces.push_back(make_piece(curve, sub, xi));
        }
    }
    return out;
}

double select_xi(double eta) {
    if (!(eta < 1.0)) throw std::invalid_argument("select_xi: eta must be < 1");
    double lower = (3.0 * eta - 1.0) / (1.0 + eta);
    if (lower <= 0.0) return 0.8;
    return 0.5 * (lower + 1.0);
}

std::vector<MonotonePiece> monotone_subpieces(const Curve& curve, const Interval& piece,
                                              double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("monotone_subpieces: margin must be > 0");
    // f'' keeps one sign on a nondegenerate piece, so f' is strictly monotone
    // there and has at most one zero.
    std::vector<Interval> parts;
    double da = curve.d1(piece.lo), db = curve.d1(piece.hi);
    if (da == 0.0) {
        if (piece.lo + margin < piece.hi) parts.push_back({piece.lo + margin, piece.hi});
    } else if (db == 0.0) {
        if (piece.lo < piece.hi - margin) parts.push_back({piece.lo, piece.hi - margin});
    } else if (std::signbit(da) == std::signbit(db)) {
        parts.push_back(piece);
    } else {
        double a = piece.lo, b = piece.hi;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            double m = 0.5 * (a + b);
            double dm = curve.d1(m);
            if (dm == 0.0) { a = b = m; break; }
            if (std::signbit(dm) == std::signbit(da))
                a = m;
            else
                b = m;
        }
        double z = 0.5 * (a + b);
        if (z - margin > piece.lo) parts.push_back({piece.lo, z - margin});
        if (z + margin < piece.hi) parts.push_back({z + margin, piece.hi});
    }
    std::vector<MonotonePiece> out;
    for (Interval part : parts) {
        MonotonePiece mp;
        mp.I = part;
        double va = std::fabs(curve.d1(part.lo)), vb = std::fabs(curve.d1(part.hi));
        mp.d1_min_abs = std::min(va, vb);  // |f'| monotone on the part
        mp.d1_max_abs = std::max(va, vb);
        mp.d1_sign = curve.d1(0.5 * (part.lo + part.hi)) >= 0.0 ? 1 : -1;
        if (mp.d1_min_abs > 0.0) out.push_back(mp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

Curve parse_curve_expr(const std::string& expr, std::optional<Interval> interval) {
    std::string name = expr;
    std::vector<double> coeffs;
    auto paren = expr.find('(');
    if (paren != std::string::npos) {
        name = expr.substr(0, paren);
        auto close = expr.rfind(')');
        if (close == std::string::npos || close < paren)
            throw std::invalid_argument("parse_curve_expr: unbalanced parentheses in \"" + expr + "\"");
        std::string args = expr.substr(paren + 1, close - paren - 1);
        std::replace(args.begin(), args.end(), ',', ' ');
        std::istringstream as(args);
        double v;
        while (as >> v) coeffs.push_back(v);
    }
    // strip whitespace
    name.erase(std::remove_if(name.begin(), name.end(),
                              [](unsigned char ch) { return std::isspace(ch); }),
               name.end());

    auto I = [&](Interval dflt) { return interval.value_or(dflt); };
    if (name == "parabola") return Curve::parabola(I({0.0, 1.0}));
    if (name == "cubic") return Curve::cubic(I({-1.0, 1.0}));
    if (name == "circle") return Curve::circle_arc(I({-0.7, 0.7}));
    if (name == "exp") return Curve::exponential(I({0.0, 1.0}));
    if (name == "sin") return Curve::sine(I({0.1, 3.0}));
    if (name == "poly") {
        if (coeffs.empty()) throw std::invalid_argument("parse_curve_expr: poly needs coefficients");
        return Curve::polynomial(coeffs, I({0.0, 1.0}));
    }
    throw std::invalid_argument("parse_curve_expr: unknown curve \"" + expr + "\"");
}

}  // namespace diolab
