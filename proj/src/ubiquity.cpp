#include "diolab/ubiquity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "diolab/series.hpp"
#include "diolab/util.hpp"

namespace diolab {

// ---------------------------------------------------------------------------
// UFunc
// ---------------------------------------------------------------------------

struct UFunc::Node {
    Kind kind;
    std::vector<std::int64_t> boundaries;  // Staircase

    // PartialSums state
    std::optional<ApproxFunc> psi1, psi2;
    mutable std::mutex mu;
    mutable std::vector<double> prefix;  // prefix[t] = sum_{j<=t} 2^j psi1(2^j) psi2(2^j)
    bool divergent = false;
    static constexpr std::int64_t kCap = (std::int64_t{1} << 20);

    double eval(double q) const {
        switch (kind) {
            case Kind::Staircase: {
                std::int64_t l = static_cast<std::int64_t>(std::floor(q));
                if (l < 1) l = 1;
                auto it = std::lower_bound(boundaries.begin(), boundaries.end(), l);
                if (it == boundaries.end()) return static_cast<double>(boundaries.size());
                return static_cast<double>(it - boundaries.begin()) + 1.0;
            }
            case Kind::PartialSums: {
                std::int64_t t_max = static_cast<std::int64_t>(std::floor(q));
                if (t_max < 0) t_max = 0;
                if (t_max > kCap)
                    throw std::domain_error("UFunc::partial_sums: evaluation beyond 2^20 cap");
                std::lock_guard<std::mutex> lock(mu);
                while (static_cast<std::int64_t>(prefix.size()) <= t_max) {
                    double prev = prefix.empty() ? 0.0 : prefix.back();
                    if (prev >= 1e100 || std::isinf(prev)) {
                        prefix.push_back(std::numeric_limits<double>::infinity());
                        continue;
                    }
                    std::int64_t j = static_cast<std::int64_t>(prefix.size());
                    double term;
                    if (j > 1020) {
                        // scale 2^j is no longer representable; decayed terms
                        // contribute nothing, growing ones have saturated above
                        term = 0.0;
                    } else {
                        double scale = std::ldexp(1.0, static_cast<int>(j));
                        term = scale * psi1->eval(scale) * psi2->eval(scale);
                    }
                    prefix.push_back(prev + term);
                }
                return prefix[static_cast<std::size_t>(t_max)];
            }
            case Kind::Log2:
                return std::log2(2.0 + std::max(q, 0.0));
        }
        return 0.0;
    }
};

UFunc UFunc::staircase(std::vector<std::int64_t> boundaries) {
    if (boundaries.empty()) throw std::invalid_argument("UFunc::staircase: no blocks");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i] <= boundaries[i - 1])
            throw std::invalid_argument("UFunc::staircase: boundaries must increase strictly");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Staircase;
    n->boundaries = std::move(boundaries);
    return UFunc(n);
}

UFunc UFunc::partial_sums(ApproxFunc psi1, ApproxFunc psi2) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::PartialSums;
    n->psi1 = std::move(psi1);
    n->psi2 = std::move(psi2);
    auto verdict = classify_lebesgue(*n->psi1, *n->psi2,
                                     ClassifyOptions{.levels = 30, .diagnostics = false});
    n->divergent = verdict.verdict == Verdict::Diverges;
    return UFunc(n);
}

UFunc UFunc::log2_default() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Log2;
    return UFunc(n);
}

double UFunc::eval(double q) const { return node_->eval(q); }
UFunc::Kind UFunc::kind() const { return node_->kind; }
bool UFunc::divergent_hint() const { return node_->divergent; }

std::string UFunc::describe() const {
    switch (node_->kind) {
        case Kind::Staircase: {
            std::ostringstream os;
            os << "staircase[" << node_->boundaries.size() << " blocks]";
            return os.str();
        }
        case Kind::PartialSums:
            return "dyadic-partial-sums(" + node_->psi1->describe() + ", " +
                   node_->psi2->describe() + ")";
        case Kind::Log2:
            return "log2(2+t)";
    }
    return "?";
}

StaircaseBuild build_u_staircase(const std::function<double(std::int64_t)>& term,
                                 std::int64_t budget) {
    std::vector<std::int64_t> boundaries;
    double block = 0.0;
    for (std::int64_t l = 1; l <= budget; ++l) {
        double v = term(l);
        if (!(v >= 0.0))
            throw std::invalid_argument("build_u_staircase: term must be nonnegative");
        block += v;
        if (block > 1.0) {
            boundaries.push_back(l);
            block = 0.0;
        }
    }
    if (boundaries.empty())
        throw StaircaseIncomplete("build_u_staircase: no block closed within the budget", 0);
    // A trailing open block is fine when the budget merely truncated it; a
    // plateau is an open block far longer than the blocks were running and
    // still short of the next unit.
    std::int64_t last_len = boundaries.size() >= 2
                                ? boundaries.back() - boundaries[boundaries.size() - 2]
                                : boundaries.back();
    std::int64_t open_len = budget - boundaries.back();
    if (block > 0.0 && block <= 1.0 && open_len > 4 * std::max<std::int64_t>(last_len, 1)) {
        throw StaircaseIncomplete("build_u_staircase: tail plateaued below the next unit after " +
                                      std::to_string(boundaries.size()) + " block(s)",
                                  static_cast<int>(boundaries.size()));
    }
    StaircaseBuild out{UFunc::staircase(boundaries), boundaries,
                       static_cast<int>(boundaries.size())};
    return out;
}

UFunc build_u_partial_sums(const ApproxFunc& psi1, const ApproxFunc& psi2) {
    return UFunc::partial_sums(psi1, psi2);
}

std::vector<std::string> UbiquityWiring::check(int t_max) const {
    std::vector<std::string> warnings;
    // psi(t) -> 0 and 1/(t psi(t)) -> 0, probed at dyadic t
    double hi = std::ldexp(1.0, t_max);
    double mid = std::ldexp(1.0, t_max / 2);
    if (psi.eval(hi) > 0.9 * psi.eval(2.0))
        warnings.push_back("psi shows no decay on the probed range");
    if (!(hi * psi.eval(hi) > mid * psi.eval(mid)))
        warnings.push_back("1/(t psi(t)) shows no decay on the probed range (t psi(t) not growing)");
    // Psi halves along dyadic steps
    for (int t = 1; t < t_max; ++t) {
        double a = Psi(std::ldexp(1.0, t));
        double b = Psi(std::ldexp(1.0, t + 1));
        if (b > 0.5 * a + kTieTol) {
            warnings.push_back("Psi(2^{t+1}) > Psi(2^t)/2 at t = " + std::to_string(t));
            break;
        }
    }
    // u nondecreasing on a coarse probe
    double prev = u.eval(1.0);
    for (int t = 1; t <= t_max; ++t) {
        double cur = u.eval(std::ldexp(1.0, t));
        if (cur + kTieTol < prev) {
            warnings.push_back("u decreases at 2^" + std::to_string(t));
            break;
        }
        prev = cur;
    }
    return warnings;
}

std::vector<CoverageSweep> verify_local_ubiquity(const Curve& curve, Interval J,
                                                 const ApproxFunc& psi, double theta1,
                                                 double theta2, const UFunc* u,
                                                 const std::vector<std::int64_t>& Qs,
                                                 const std::vector<double>& C_grid,
                                                 std::vector<std::string>* warnings,
                                                 int threads) {
    if (!J.valid()) throw std::invalid_argument("verify_local_ubiquity: empty window");
    if (warnings && !Qs.empty()) {
        // hypotheses on psi (decay of psi and of 1/(t psi)), probed on range
        double q_hi = static_cast<double>(*std::max_element(Qs.begin(), Qs.end()));
        if (psi.eval(q_hi) > 0.9 * psi.eval(2.0))
            warnings->push_back("psi shows no decay over the tested Q range");
        if (!(q_hi * psi.eval(q_hi) > 2.0 * psi.eval(2.0)))
            warnings->push_back("t*psi(t) not growing over the tested Q range");
    }

    std::vector<CoverageSweep> sweeps;
    sweeps.reserve(Qs.size());
    for (std::int64_t Q : Qs) {
        ShiftedQuery query;
        query.curve = curve;
        query.window = J;
        query.Q = Q;
        query.mode = RangeMode::Half;
        double psiQ = psi.eval(static_cast<double>(Q));
        query.threshold = Threshold::fixed(psiQ / static_cast<double>(Q));
        query.theta1 = theta1;
        query.theta2 = theta2;
        query.threads = threads;
        auto enumerated = enumerate_AQ(query);
        if (warnings)
            for (auto& w : enumerated.warnings) warnings->push_back(w);

        CoverageSweep sweep;
        sweep.Q = Q;
        sweep.points = enumerated.points.size();
        if (u) sweep.rho_radius = u->eval(static_cast<double>(Q)) /
                                  (static_cast<double>(Q) * static_cast<double>(Q) * psiQ);

        double denom = static_cast<double>(Q) * static_cast<double>(Q) * psiQ;
        for (double C : C_grid) {
            double radius = C / denom;
            std::vector<std::pair<double, double>> balls;
            balls.reserve(enumerated.points.size());
            for (const auto& pt : enumerated.points)
                balls.emplace_back(std::max(pt.x - radius, J.lo), std::min(pt.x + radius, J.hi));
            CoverageReport rep;
            rep.J = J;
            rep.Q = Q;
            rep.C = C;
            rep.covered = union_length(std::move(balls));
            rep.fraction = rep.covered / J.length();
            rep.points = enumerated.points.size();
            rep.meets_half = rep.fraction >= 0.5;
            if (rep.meets_half && !sweep.minimal_C) sweep.minimal_C = C;
            sweep.by_C.push_back(rep);
        }
        sweeps.push_back(std::move(sweep));
    }
    return sweeps;
}

std::optional<double> liminf_fraction(const std::vector<CoverageSweep>& sweeps, double C,
                                      int burn_in) {
    std::optional<double> lim;
    for (std::size_t i = static_cast<std::size_t>(std::max(burn_in, 0)); i < sweeps.size(); ++i) {
        for (const auto& rep : sweeps[i].by_C) {
            if (rep.C == C) {
                if (!lim || rep.fraction < *lim) lim = rep.fraction;
            }
        }
    }
    return lim;
}

}  // namespace diolab
