#include "diolab/funcs.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace diolab {

namespace {

double clamped_log(double q) { return std::log(std::max(q, 2.0)); }

// L(r) = max(1, ln(1/r)) keeps PowerLog dimension functions positive and
// increasing on the radii we ever query.
double log_recip(double r) { return std::max(1.0, -std::log(r)); }

// Asymptotic comparison of c*q^{-v}(ln q)^{-a} forms: returns true when f
// eventually dominates g (f/g -> infinity or a constant > 1).
bool eventually_ge(const AsymptoticPower& f, const AsymptoticPower& g) {
    if (f.v != g.v) return f.v < g.v;
    if (f.a != g.a) return f.a < g.a;
    return f.c >= g.c;
}

}  // namespace

// ---------------------------------------------------------------------------
// ApproxFunc
// ---------------------------------------------------------------------------

namespace {
// Shared prefix-sum state for the slowdown pair. Grows on demand under a
// mutex; values are append-only so concurrent readers stay consistent.
struct SlowdownState {
    ApproxFunc psi1, psi2;
    mutable std::mutex mu;
    mutable std::vector<double> prefix;  // prefix[k] = sum_{t=1..k} psi1(t)psi2(t); prefix[0] = 0
    static constexpr std::int64_t kCap = (std::int64_t{1} << 22);

    SlowdownState(ApproxFunc a, ApproxFunc b) : psi1(std::move(a)), psi2(std::move(b)) {
        prefix.push_back(0.0);
    }

    double v_of(double q) const {
        std::int64_t k = static_cast<std::int64_t>(std::floor(q));
        if (k < 1) k = 1;
        if (k > kCap)
            throw std::domain_error("slowdown_by_partial_sums: evaluation beyond q = 2^22 cap");
        std::lock_guard<std::mutex> lock(mu);
        while (static_cast<std::int64_t>(prefix.size()) <= k) {
            std::int64_t t = static_cast<std::int64_t>(prefix.size());
            double qt = static_cast<double>(t);
            prefix.push_back(prefix.back() + psi1.eval(qt) * psi2.eval(qt));
        }
        return prefix[static_cast<std::size_t>(k)];
    }
};
}  // namespace

struct ApproxFunc::Node {
    Kind kind;
    double v = 0.0, a = 0.0, c = 1.0;  // Power / PowerLog / Scaled factor in c / floor exponent in v
    std::vector<std::pair<double, double>> rows;               // Table
    std::shared_ptr<const Node> left, right;                   // composites
    std::shared_ptr<SlowdownState> slow;                       // Slowdown
    int slow_which = 0;                                        // 1 or 2

    double eval(double q) const {
        if (q < 1.0) q = 1.0;
        switch (kind) {
            case Kind::Power:
                return c * std::pow(q, -v);
            case Kind::PowerLog:
                return c * std::pow(q, -v) * std::pow(clamped_log(q), -a);
            case Kind::Table: {
                // last row with rows[i].first <= q; before the first row use it
                auto it = std::upper_bound(rows.begin(), rows.end(), q,
                                           [](double x, const auto& r) { return x < r.first; });
                if (it == rows.begin()) return rows.front().second;
                return std::prev(it)->second;
            }
            case Kind::Scaled:
                return c * left->eval(q);
            case Kind::FlooredMax:
                return std::max(left->eval(q), std::pow(q, -v));
            case Kind::MinOf:
                return std::min(left->eval(q), right->eval(q));
            case Kind::MaxOf:
                return std::max(left->eval(q), right->eval(q));
            case Kind::Slowdown: {
                double base = slow_which == 1 ? slow->psi1.eval(q) : slow->psi2.eval(q);
                return base / std::sqrt(slow->v_of(q));
            }
        }
        return 0.0;
    }

    std::optional<AsymptoticPower> asymp_minmax(bool want_max) const {
        auto l = left->asymp();
        auto r = right->asymp();
        if (!l || !r) return std::nullopt;
        bool left_dominates = eventually_ge(*l, *r);
        // max picks the eventually-larger branch, min the other one; on an
        // exact (v, a) tie the coefficients combine.
        AsymptoticPower big = left_dominates ? *l : *r;
        AsymptoticPower small = left_dominates ? *r : *l;
        if (l->v == r->v && l->a == r->a) {
            big.c = std::max(l->c, r->c);
            small.c = std::min(l->c, r->c);
        }
        return want_max ? big : small;
    }

    std::optional<AsymptoticPower> asymp() const {
        switch (kind) {
            case Kind::Power:
                return AsymptoticPower{v, 0.0, c};
            case Kind::PowerLog:
                return AsymptoticPower{v, a, c};
            case Kind::Table:
            case Kind::Slowdown:
                return std::nullopt;
            case Kind::Scaled: {
                auto b = left->asymp();
                if (!b) return std::nullopt;
                b->c *= c;
                return b;
            }
            case Kind::FlooredMax: {
                auto b = left->asymp();
                if (!b) return std::nullopt;
                AsymptoticPower fl{v, 0.0, 1.0};
                if (b->v == fl.v && b->a == fl.a)
                    return AsymptoticPower{b->v, b->a, std::max(b->c, 1.0)};
                return eventually_ge(*b, fl) ? *b : fl;
            }
            case Kind::MinOf:
                return asymp_minmax(false);
            case Kind::MaxOf:
                return asymp_minmax(true);
        }
        return std::nullopt;
    }

    std::optional<double> tlimit() const {
        switch (kind) {
            case Kind::Table:
                return rows.back().first;
            case Kind::Power:
            case Kind::PowerLog:
                return std::nullopt;
            case Kind::Slowdown:
                return static_cast<double>(SlowdownState::kCap);
            default: {
                std::optional<double> lim;
                for (auto* child : {left.get(), right.get()}) {
                    if (!child) continue;
                    auto cc = child->tlimit();
                    if (cc) lim = lim ? std::min(*lim, *cc) : *cc;
                }
                return lim;
            }
        }
    }
};

double ApproxFunc::eval(double q) const { return node_->eval(q); }
ApproxFunc::Kind ApproxFunc::kind() const { return node_->kind; }

ApproxFunc ApproxFunc::power(double v, double c) {
    if (!(v > 0.0) || !(c > 0.0))
        throw std::invalid_argument("ApproxFunc::power: need v > 0 and c > 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->v = v;
    n->c = c;
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::power_log(double v, double a, double c) {
    if (!(v > 0.0) || !(c > 0.0))
        throw std::invalid_argument("ApproxFunc::power_log: need v > 0 and c > 0");
    // Nonincreasing for q >= 2 requires v*ln(q) + a >= 0 from q = 2 on.
    if (a < 0.0 && std::exp(-a / v) > 2.0 + kTieTol)
        throw std::invalid_argument("ApproxFunc::power_log: not monotone nonincreasing for this (v, a)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::PowerLog;
    n->v = v;
    n->a = a;
    n->c = c;
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::table(std::vector<std::pair<double, double>> rows) {
    if (rows.empty()) throw std::invalid_argument("ApproxFunc::table: empty table");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].second > 0.0))
            throw std::invalid_argument("ApproxFunc::table: values must be positive");
        if (i > 0) {
            if (!(rows[i].first > rows[i - 1].first))
                throw std::invalid_argument("ApproxFunc::table: q column must be strictly increasing");
            if (rows[i].second > rows[i - 1].second + kTieTol)
                throw std::invalid_argument("ApproxFunc::table: values must be nonincreasing");
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Table;
    n->rows = std::move(rows);
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("ApproxFunc::table_from_csv: cannot open " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double q, val;
        if (ls >> q >> val) rows.emplace_back(q, val);
    }
    return table(std::move(rows));
}

ApproxFunc ApproxFunc::scaled(const ApproxFunc& base, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("ApproxFunc::scaled: factor must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scaled;
    n->c = factor;
    n->left = base.node_;
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::floored_max(const ApproxFunc& base, double floor_exponent) {
    if (!(floor_exponent > 0.0))
        throw std::invalid_argument("ApproxFunc::floored_max: floor exponent must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::FlooredMax;
    n->v = floor_exponent;
    n->left = base.node_;
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::min_of(const ApproxFunc& a, const ApproxFunc& b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::MinOf;
    n->left = a.node_;
    n->right = b.node_;
    return ApproxFunc(n);
}

ApproxFunc ApproxFunc::max_of(const ApproxFunc& a, const ApproxFunc& b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::MaxOf;
    n->left = a.node_;
    n->right = b.node_;
    return ApproxFunc(n);
}

std::optional<AsymptoticPower> ApproxFunc::asymptotic() const { return node_->asymp(); }
std::optional<double> ApproxFunc::table_limit() const { return node_->tlimit(); }

std::string ApproxFunc::describe() const {
    std::ostringstream os;
    const Node* n = node_.get();
    switch (n->kind) {
        case Kind::Power:
            if (n->c != 1.0) os << n->c << "*";
            os << "q^-" << n->v;
            break;
        case Kind::PowerLog:
            if (n->c != 1.0) os << n->c << "*";
            os << "q^-" << n->v << "*(ln q)^-" << n->a;
            break;
        case Kind::Table:
            os << "table[" << n->rows.size() << " rows, q<=" << n->rows.back().first << "]";
            break;
        case Kind::Scaled:
            os << n->c << "*(" << ApproxFunc(n->left).describe() << ")";
            break;
        case Kind::FlooredMax:
            os << "max(" << ApproxFunc(n->left).describe() << ", q^-" << n->v << ")";
            break;
        case Kind::MinOf:
            os << "min(" << ApproxFunc(n->left).describe() << ", " << ApproxFunc(n->right).describe() << ")";
            break;
        case Kind::MaxOf:
            os << "max(" << ApproxFunc(n->left).describe() << ", " << ApproxFunc(n->right).describe() << ")";
            break;
        case Kind::Slowdown:
            os << "slowdown" << n->slow_which << "("
               << n->slow->psi1.describe() << ", " << n->slow->psi2.describe() << ")";
            break;
    }
    return os.str();
}

std::pair<ApproxFunc, ApproxFunc> reduce_min_max(const ApproxFunc& psi, const ApproxFunc& phi) {
    return {ApproxFunc::min_of(psi, phi), ApproxFunc::max_of(psi, phi)};
}

ApproxFunc floor_modify(const ApproxFunc& psi, double floor_exponent) {
    return ApproxFunc::floored_max(psi, floor_exponent);
}

std::pair<ApproxFunc, ApproxFunc> slowdown_by_partial_sums(const ApproxFunc& psi1,
                                                           const ApproxFunc& psi2) {
    auto state = std::make_shared<SlowdownState>(psi1, psi2);
    auto mk = [&](int which) {
        auto n = std::make_shared<ApproxFunc::Node>();
        n->kind = ApproxFunc::Kind::Slowdown;
        n->slow = state;
        n->slow_which = which;
        return ApproxFunc(n);
    };
    return {mk(1), mk(2)};
}

// ---------------------------------------------------------------------------
// DimFunc
// ---------------------------------------------------------------------------

struct DimFunc::Node {
    Kind kind;
    double s = 1.0, a = 0.0;
    std::vector<std::pair<double, double>> rows;
    std::optional<Witness> witness;

    double eval(double r) const {
        switch (kind) {
            case Kind::Power:
                return std::pow(r, s);
            case Kind::PowerLog:
                return std::pow(r, s) * std::pow(log_recip(r), a);
            case Kind::Identity:
                return r;
            case Kind::Table: {
                if (r <= rows.front().first)
                    return rows.front().second * (r / rows.front().first);
                if (r >= rows.back().first) return rows.back().second;
                auto it = std::upper_bound(rows.begin(), rows.end(), r,
                                           [](double x, const auto& row) { return x < row.first; });
                auto hi = *it;
                auto lo = *std::prev(it);
                double w = (r - lo.first) / (hi.first - lo.first);
                return lo.second + w * (hi.second - lo.second);
            }
        }
        return 0.0;
    }
};

double DimFunc::eval(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("DimFunc::eval: radius must be positive");
    return node_->eval(r);
}

DimFunc::Kind DimFunc::kind() const { return node_->kind; }

DimFunc DimFunc::power(double s) {
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("DimFunc::power: need s in (0, 1]");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->s = s;
    return DimFunc(n);
}

DimFunc DimFunc::power_log(double s, double a) {
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("DimFunc::power_log: need s in (0, 1]");
    auto n = std::make_shared<Node>();
    n->kind = Kind::PowerLog;
    n->s = s;
    n->a = a;
    return DimFunc(n);
}

DimFunc DimFunc::identity() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Identity;
    return DimFunc(n);
}

DimFunc DimFunc::table(std::vector<std::pair<double, double>> rows) {
    if (rows.empty()) throw std::invalid_argument("DimFunc::table: empty table");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].first > 0.0) || !(rows[i].second > 0.0))
            throw std::invalid_argument("DimFunc::table: entries must be positive");
        if (i > 0) {
            if (!(rows[i].first > rows[i - 1].first))
                throw std::invalid_argument("DimFunc::table: r column must be strictly increasing");
            if (rows[i].second + kTieTol < rows[i - 1].second)
                throw std::invalid_argument("DimFunc::table: values must be nondecreasing");
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Table;
    n->rows = std::move(rows);
    return DimFunc(n);
}

DimFunc DimFunc::table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("DimFunc::table_from_csv: cannot open " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double r, val;
        if (ls >> r >> val) rows.emplace_back(r, val);
    }
    return table(std::move(rows));
}

std::optional<AsymptoticPower> DimFunc::asymptotic() const {
    switch (node_->kind) {
        case Kind::Power:
            return AsymptoticPower{node_->s, 0.0, 1.0};
        case Kind::PowerLog:
            return AsymptoticPower{node_->s, node_->a, 1.0};
        case Kind::Identity:
            return AsymptoticPower{1.0, 0.0, 1.0};
        case Kind::Table:
            return std::nullopt;
    }
    return std::nullopt;
}

std::string DimFunc::describe() const {
    std::ostringstream os;
    switch (node_->kind) {
        case Kind::Power: os << "r^" << node_->s; break;
        case Kind::PowerLog: os << "r^" << node_->s << "*L^" << node_->a; break;
        case Kind::Identity: os << "r"; break;
        case Kind::Table: os << "table[" << node_->rows.size() << " rows]"; break;
    }
    return os.str();
}

DimFunc DimFunc::with_witness(Witness w) const {
    if (!(w.r0 > 0.0 && w.r0 < 1.0 && w.lambda1 > 0.0 && w.lambda1 < 1.0 && w.lambda2 > 0.0 &&
          w.lambda2 < 1.0))
        throw std::invalid_argument("DimFunc::with_witness: parameters must lie in (0, 1)");
    auto n = std::make_shared<Node>(*node_);
    n->witness = w;
    return DimFunc(n);
}

std::optional<DimFunc::Witness> DimFunc::witness() const { return node_->witness; }

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

AdmissibilityReport check_t04_admissible(const DimFunc& h, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("check_t04_admissible: empty probe grid");
    AdmissibilityReport rep;
    if (auto form = h.asymptotic()) {
        rep.analytic = true;
        // r^{-1} h(r) = r^{s-1} L^a: unbounded and nonincreasing iff s < 1,
        // or s == 1 with a > 0.
        if (form->v < 1.0) {
            rep.monotone_ok = rep.unbounded_ok = rep.admissible = true;
        } else if (form->v == 1.0 && form->a > 0.0) {
            rep.monotone_ok = rep.unbounded_ok = rep.admissible = true;
        } else {
            rep.admissible = false;
            rep.monotone_ok = (form->v > 1.0) ? false : true;
            rep.unbounded_ok = false;
            rep.reason = (form->v == 1.0 && form->a == 0.0)
                             ? "h(r) = r: r^-1 h(r) does not grow (Lebesgue case)"
                             : "r^-1 h(r) does not grow as r -> 0";
        }
        return rep;
    }
    // Grid evidence for tables: walk the grid in decreasing r.
    std::vector<double> rs = grid;
    std::sort(rs.begin(), rs.end(), std::greater<>());
    rep.monotone_ok = true;
    double first = rs.front(), last = rs.back();
    double g_first = h.eval(first) / first;
    double g_prev = g_first;
    for (std::size_t i = 1; i < rs.size(); ++i) {
        double g = h.eval(rs[i]) / rs[i];
        if (g + kTieTol < g_prev) {
            rep.monotone_ok = false;
            rep.reason = "r^-1 h(r) decreased along the probe grid";
            break;
        }
        g_prev = g;
    }
    double g_last = h.eval(last) / last;
    rep.unbounded_ok = g_last > 10.0 * g_first;
    if (!rep.unbounded_ok && rep.reason.empty())
        rep.reason = "no growth evidence for r^-1 h(r) at the grid tail";
    rep.admissible = rep.monotone_ok && rep.unbounded_ok;
    return rep;
}

RegularityResult check_regular(const DimFunc& h, double lambda1, const std::vector<double>& grid) {
    if (!(lambda1 > 0.0 && lambda1 < 1.0))
        throw std::invalid_argument("check_regular: lambda1 must lie in (0, 1)");
    if (grid.empty()) throw std::invalid_argument("check_regular: empty probe grid");
    RegularityResult res;
    res.lambda2 = 0.0;
    for (double r : grid) {
        double hr = h.eval(r);
        if (!(hr > 0.0)) throw std::invalid_argument("check_regular: h vanishes on the grid");
        double ratio = h.eval(lambda1 * r) / hr;
        if (ratio > res.lambda2) {
            res.lambda2 = ratio;
            res.worst_r = r;
        }
    }
    res.holds = res.lambda2 < 1.0 - kTieTol;
    return res;
}

std::vector<double> geometric_grid(double r0, double ratio, int n) {
    if (!(r0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || n <= 0)
        throw std::invalid_argument("geometric_grid: need r0 > 0, ratio in (0,1), n > 0");
    std::vector<double> g(static_cast<std::size_t>(n));
    double r = r0;
    for (int i = 0; i < n; ++i, r *= ratio) g[static_cast<std::size_t>(i)] = r;
    return g;
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(pos) +
                                    ": " + what + " in \"" + s + "\"");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (start == pos) fail("expected identifier");
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                                  s[pos] == '-' || s[pos] == '+' || s[pos] == 'e' || s[pos] == 'E'))
            ++pos;
        if (start == pos) fail("expected number");
        try {
            return std::stod(s.substr(start, pos - start));
        } catch (const std::exception&) {
            fail("bad number");
        }
    }

    // Raw argument up to the matching ')' or next ',' (used for table paths).
    std::string raw_arg() {
        skip_ws();
        std::size_t start = pos;
        int depth = 0;
        while (pos < s.size()) {
            char c = s[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (c == ',' && depth == 0) break;
            ++pos;
        }
        std::string out = s.substr(start, pos - start);
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
        return out;
    }

    // key=value, or a bare positional number
    double named(const std::string& key, std::optional<double> fallback = std::nullopt) {
        skip_ws();
        std::size_t save = pos;
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '-' ||
                               s[pos] == '+' || s[pos] == '.'))
            return number();
        if (pos < s.size() && s[pos] != ')') {
            std::string k = ident();
            if (eat('=')) {
                if (k == key) return number();
            }
            pos = save;
        }
        if (fallback) return *fallback;
        fail("missing parameter '" + key + "'");
    }

    ApproxFunc approx() {
        std::string name = ident();
        if (name == "pow") {
            expect('(');
            double v = named("v");
            double c = eat(',') ? named("c", 1.0) : 1.0;
            expect(')');
            return ApproxFunc::power(v, c);
        }
        if (name == "powlog") {
            expect('(');
            double v = named("v");
            expect(',');
            double a = named("a");
            double c = eat(',') ? named("c", 1.0) : 1.0;
            expect(')');
            return ApproxFunc::power_log(v, a, c);
        }
        if (name == "table") {
            expect('(');
            std::string path = raw_arg();
            expect(')');
            return ApproxFunc::table_from_csv(path);
        }
        if (name == "scale") {
            expect('(');
            ApproxFunc base = approx();
            expect(',');
            double k = named("k");
            expect(')');
            return ApproxFunc::scaled(base, k);
        }
        if (name == "floor") {
            expect('(');
            ApproxFunc base = approx();
            expect(',');
            double e = named("e");
            expect(')');
            return ApproxFunc::floored_max(base, e);
        }
        if (name == "min" || name == "max") {
            expect('(');
            ApproxFunc a = approx();
            expect(',');
            ApproxFunc b = approx();
            expect(')');
            return name == "min" ? ApproxFunc::min_of(a, b) : ApproxFunc::max_of(a, b);
        }
        fail("unknown function family '" + name + "'");
    }

    DimFunc dim() {
        std::string name = ident();
        if (name == "pow") {
            expect('(');
            double sv = named("s");
            expect(')');
            return DimFunc::power(sv);
        }
        if (name == "powlog") {
            expect('(');
            double sv = named("s");
            expect(',');
            double a = named("a");
            expect(')');
            return DimFunc::power_log(sv, a);
        }
        if (name == "identity") return DimFunc::identity();
        if (name == "table") {
            expect('(');
            std::string path = raw_arg();
            expect(')');
            return DimFunc::table_from_csv(path);
        }
        fail("unknown dimension function '" + name + "'");
    }
};

}  // namespace

ApproxFunc parse_approx_expr(const std::string& expr) {
    Parser p(expr);
    ApproxFunc f = p.approx();
    p.skip_ws();
    if (p.pos != expr.size()) p.fail("trailing input");
    return f;
}

DimFunc parse_dim_expr(const std::string& expr) {
    Parser p(expr);
    DimFunc f = p.dim();
    p.skip_ws();
    if (p.pos != expr.size()) p.fail("trailing input");
    return f;
}

}  // namespace diolab
