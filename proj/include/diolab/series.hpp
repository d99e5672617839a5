#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diolab/funcs.hpp"

namespace diolab {

enum class Verdict { Converges, Diverges, Inconclusive };
enum class Method { ClosedFormExponent, DyadicCondensation };

const char* to_string(Verdict v);
const char* to_string(Method m);

struct SeriesVerdict {
    Verdict verdict = Verdict::Inconclusive;
    Method method = Method::DyadicCondensation;
    // Partial sums of the series at dyadic checkpoints t = 0..T (exact block
    // summation up to exact_levels, endpoint*count estimates above).
    std::vector<double> partial_sums;
    std::string note;
};

struct ClassifyOptions {
    int levels = 40;        // dyadic checkpoints t = 0..levels
    int exact_levels = 12;  // blocks summed term-by-term up to this level
    int window = 8;         // trailing blocks inspected by the heuristic
    double geo_ratio = 0.9; // (a) convergent when block ratios stay below this
    double floor_c = 1e-9;  // (b) divergent when trailing blocks stay above this
    bool diagnostics = true;
};

// One dyadic block 2^t <= q < 2^{t+1} of a positive-term series.
struct CondenseRow {
    int t = 0;
    double raw_block = 0.0;   // sum over the block (exact for t <= exact_levels)
    double condensed = 0.0;   // 2^t * term(2^t)
    double cum_raw = 0.0;
    double cum_condensed = 0.0;
};

std::vector<CondenseRow> dyadic_condense(const std::function<double(double)>& term, int levels,
                                         int exact_levels = 20);

// sum_q q * h(min{psi1,psi2}(q)/q) * max{psi1,psi2}(q)
SeriesVerdict classify_weighted_hausdorff(const ApproxFunc& psi1, const ApproxFunc& psi2,
                                          const DimFunc& h, const ClassifyOptions& opts = {});

// sum_q q^{1-s} psi^{s+1}(q), s in (0, 1]
SeriesVerdict classify_curve_hausdorff(const ApproxFunc& psi, double s,
                                       const ClassifyOptions& opts = {});

// sum_q q^{2-s} psi^{s}(q), s in (0, 2]
SeriesVerdict classify_kj(const ApproxFunc& psi, double s, const ClassifyOptions& opts = {});

// sum_q psi1(q) psi2(q)
SeriesVerdict classify_lebesgue(const ApproxFunc& psi1, const ApproxFunc& psi2,
                                const ClassifyOptions& opts = {});

// s = 1: sum_q (log q) psi(q); s < 1: sum_q q^{1-s} psi^{s}(q) (log q)^{s}
SeriesVerdict classify_multiplicative(const ApproxFunc& psi, double s,
                                      const ClassifyOptions& opts = {});

// (2 - min{v1, v2}) / (1 + max{v1, v2}); requires 0 < min{v1, v2} < 1.
// *hypothesis_violated (optional) is set when the result is >= 1.
double dimension_s0(double v1, double v2, bool* hypothesis_violated = nullptr);

// Bundle of one weighted problem instance plus the lower-bound hypothesis
// max{psi1, psi2}(q) >= q^{-eta}.
struct WeightedProblem {
    ApproxFunc psi1, psi2;
    DimFunc h;
    double theta1 = 0.0, theta2 = 0.0;
    double eta = 0.9;
};

enum class EtaCheck { Off, Warn, Enforce };

// Validates eta < 1 and probes the lower bound at dyadic q. Returns warnings;
// throws std::invalid_argument under Enforce when the bound fails.
std::vector<std::string> validate_problem(const WeightedProblem& prob, EtaCheck mode,
                                          int levels = 20);

}  // namespace diolab
