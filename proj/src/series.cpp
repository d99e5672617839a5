#include "diolab/series.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace diolab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Converges: return "Converges";
        case Verdict::Diverges: return "Diverges";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(Method m) {
    return m == Method::ClosedFormExponent ? "ClosedFormExponent" : "DyadicCondensation";
}

std::vector<CondenseRow> dyadic_condense(const std::function<double(double)>& term, int levels,
                                         int exact_levels) {
    std::vector<CondenseRow> rows;
    rows.reserve(static_cast<std::size_t>(levels) + 1);
    double cum_raw = 0.0, cum_cond = 0.0;
    for (int t = 0; t <= levels; ++t) {
        CondenseRow row;
        row.t = t;
        double lo = std::ldexp(1.0, t);
        if (t <= exact_levels) {
            double block = 0.0;
            std::int64_t qlo = std::int64_t{1} << t;
            std::int64_t qhi = (std::int64_t{1} << (t + 1)) - 1;
            for (std::int64_t q = qlo; q <= qhi; ++q) block += term(static_cast<double>(q));
            row.raw_block = block;
        } else {
            // endpoint * count estimate; for monotone terms this and the
            // condensed value bracket the true block within a factor 2
            row.raw_block = term(lo) * lo;
        }
        row.condensed = lo * term(lo);
        cum_raw += row.raw_block;
        cum_cond += row.condensed;
        row.cum_raw = cum_raw;
        row.cum_condensed = cum_cond;
        rows.push_back(row);
    }
    return rows;
}

namespace {

// Verdict for a term ~ C * q^E * (log q)^A by exponent comparison.
Verdict exponent_verdict(double E, double A) {
    if (E < -1.0) return Verdict::Converges;
    if (E > -1.0) return Verdict::Diverges;
    return A < -1.0 ? Verdict::Converges : Verdict::Diverges;
}

SeriesVerdict condensation_heuristic(const std::function<double(double)>& term,
                                     const ClassifyOptions& opts,
                                     std::optional<double> table_limit) {
    SeriesVerdict out;
    out.method = Method::DyadicCondensation;

    int usable = opts.levels;
    if (table_limit) {
        int t_cap = static_cast<int>(std::floor(std::log2(*table_limit)));
        if (t_cap < usable) {
            usable = t_cap;
            out.note = "table range ends before checkpoint 2^" + std::to_string(opts.levels) +
                       "; blocks truncated at t = " + std::to_string(usable);
        }
    }

    auto rows = dyadic_condense(term, std::max(usable, 0), std::min(opts.exact_levels, usable));
    if (opts.diagnostics) {
        out.partial_sums.reserve(rows.size());
        for (const auto& r : rows) out.partial_sums.push_back(r.cum_raw);
    }

    if (table_limit && usable < opts.levels) {
        out.verdict = Verdict::Inconclusive;
        return out;
    }

    int n = static_cast<int>(rows.size());
    if (n < opts.window + 1) {
        out.verdict = Verdict::Inconclusive;
        out.note = "too few dyadic blocks for the tail heuristic";
        return out;
    }

    bool geometric = true, floored = true, monotone_down = true;
    for (int i = n - opts.window; i < n; ++i) {
        double prev = rows[static_cast<std::size_t>(i) - 1].condensed;
        double cur = rows[static_cast<std::size_t>(i)].condensed;
        if (!(prev > 0.0) || cur > prev * opts.geo_ratio) geometric = false;
        if (cur > prev + kTieTol) monotone_down = false;
        if (cur < opts.floor_c) floored = false;
    }
    if (geometric && monotone_down) {
        out.verdict = Verdict::Converges;
    } else if (floored) {
        out.verdict = Verdict::Diverges;
    } else {
        out.verdict = Verdict::Inconclusive;
        if (out.note.empty()) out.note = "tail blocks neither geometric nor bounded below";
    }
    return out;
}

SeriesVerdict classify_term(const std::function<double(double)>& term,
                            std::optional<double> closed_E, std::optional<double> closed_A,
                            std::optional<double> table_limit, const ClassifyOptions& opts) {
    if (closed_E) {
        SeriesVerdict out;
        out.method = Method::ClosedFormExponent;
        out.verdict = exponent_verdict(*closed_E, closed_A.value_or(0.0));
        if (opts.diagnostics) {
            auto rows = dyadic_condense(term, opts.levels, opts.exact_levels);
            out.partial_sums.reserve(rows.size());
            for (const auto& r : rows) out.partial_sums.push_back(r.cum_raw);
        }
        return out;
    }
    return condensation_heuristic(term, opts, table_limit);
}

std::optional<double> combined_table_limit(const ApproxFunc& a, const ApproxFunc& b) {
    auto la = a.table_limit();
    auto lb = b.table_limit();
    if (la && lb) return std::min(*la, *lb);
    return la ? la : lb;
}

}  // namespace

SeriesVerdict classify_weighted_hausdorff(const ApproxFunc& psi1, const ApproxFunc& psi2,
                                          const DimFunc& h, const ClassifyOptions& opts) {
    auto term = [psi1, psi2, h](double q) {
        double a = psi1.eval(q), b = psi2.eval(q);
        double mn = std::min(a, b), mx = std::max(a, b);
        return q * h.eval(mn / q) * mx;
    };

    auto f1 = psi1.asymptotic();
    auto f2 = psi2.asymptotic();
    auto fh = h.asymptotic();
    std::optional<double> E, A;
    if (f1 && f2 && fh) {
        // min is the eventually-smaller function, max the other one
        bool one_ge_two = f1->v < f2->v || (f1->v == f2->v && f1->a < f2->a) ||
                          (f1->v == f2->v && f1->a == f2->a && f1->c >= f2->c);
        const AsymptoticPower& mx = one_ge_two ? *f1 : *f2;
        const AsymptoticPower& mn = one_ge_two ? *f2 : *f1;
        double s = fh->v, ah = fh->a;
        // term ~ q * (q^{-(1+v_mn)} (ln q)^{-a_mn})^s * L^{ah} * q^{-v_mx} (ln q)^{-a_mx}
        // with L(min/q) ~ (1+v_mn) ln q.
        E = 1.0 - s * (1.0 + mn.v) - mx.v;
        A = -s * mn.a + ah - mx.a;
    }
    return classify_term(term, E, A, combined_table_limit(psi1, psi2), opts);
}

SeriesVerdict classify_curve_hausdorff(const ApproxFunc& psi, double s,
                                       const ClassifyOptions& opts) {
    if (!(s > 0.0) || s > 1.0)
        throw std::invalid_argument("classify_curve_hausdorff: need s in (0, 1]");
    auto term = [psi, s](double q) { return std::pow(q, 1.0 - s) * std::pow(psi.eval(q), s + 1.0); };
    std::optional<double> E, A;
    if (auto f = psi.asymptotic()) {
        E = 1.0 - s - f->v * (s + 1.0);
        A = -f->a * (s + 1.0);
    }
    return classify_term(term, E, A, psi.table_limit(), opts);
}

SeriesVerdict classify_kj(const ApproxFunc& psi, double s, const ClassifyOptions& opts) {
    if (!(s > 0.0) || s > 2.0) throw std::invalid_argument("classify_kj: need s in (0, 2]");
    auto term = [psi, s](double q) { return std::pow(q, 2.0 - s) * std::pow(psi.eval(q), s); };
    std::optional<double> E, A;
    if (auto f = psi.asymptotic()) {
        E = 2.0 - s - f->v * s;
        A = -f->a * s;
    }
    return classify_term(term, E, A, psi.table_limit(), opts);
}

SeriesVerdict classify_lebesgue(const ApproxFunc& psi1, const ApproxFunc& psi2,
                                const ClassifyOptions& opts) {
    auto term = [psi1, psi2](double q) { return psi1.eval(q) * psi2.eval(q); };
    auto f1 = psi1.asymptotic();
    auto f2 = psi2.asymptotic();
    std::optional<double> E, A;
    if (f1 && f2) {
        E = -(f1->v + f2->v);
        A = -(f1->a + f2->a);
    }
    return classify_term(term, E, A, combined_table_limit(psi1, psi2), opts);
}

SeriesVerdict classify_multiplicative(const ApproxFunc& psi, double s,
                                      const ClassifyOptions& opts) {
    if (!(s > 0.0) || s > 1.0)
        throw std::invalid_argument("classify_multiplicative: need s in (0, 1]");
    auto f = psi.asymptotic();
    std::optional<double> E, A;
    std::function<double(double)> term;
    if (s == 1.0) {
        term = [psi](double q) { return std::log(std::max(q, 2.0)) * psi.eval(q); };
        if (f) {
            E = -f->v;
            A = 1.0 - f->a;
        }
    } else {
        term = [psi, s](double q) {
            return std::pow(q, 1.0 - s) * std::pow(psi.eval(q), s) *
                   std::pow(std::log(std::max(q, 2.0)), s);
        };
        if (f) {
            E = 1.0 - s - f->v * s;
            A = s * (1.0 - f->a);
        }
    }
    return classify_term(term, E, A, psi.table_limit(), opts);
}

double dimension_s0(double v1, double v2, bool* hypothesis_violated) {
    double mn = std::min(v1, v2), mx = std::max(v1, v2);
    if (!(mn > 0.0) || !(mn < 1.0))
        throw std::invalid_argument("dimension_s0: need 0 < min{v1, v2} < 1");
    double s0 = (2.0 - mn) / (1.0 + mx);
    if (hypothesis_violated) *hypothesis_violated = s0 >= 1.0;
    return s0;
}

std::vector<std::string> validate_problem(const WeightedProblem& prob, EtaCheck mode, int levels) {
    if (!(prob.eta < 1.0)) throw std::invalid_argument("validate_problem: eta must be < 1");
    std::vector<std::string> warnings;
    if (mode == EtaCheck::Off) return warnings;
    for (int t = 0; t <= levels; ++t) {
        double q = std::ldexp(1.0, t);
        double mx = std::max(prob.psi1.eval(q), prob.psi2.eval(q));
        double bound = std::pow(q, -prob.eta);
        if (mx + kTieTol < bound) {
            std::string msg = "max{psi1, psi2}(2^" + std::to_string(t) +
                              ") falls below q^-eta with eta = " + std::to_string(prob.eta);
            if (mode == EtaCheck::Enforce) throw std::invalid_argument("validate_problem: " + msg);
            warnings.push_back(msg);
            break;
        }
    }
    return warnings;
}

}  // namespace diolab
