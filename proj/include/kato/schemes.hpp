#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kato/matrix.hpp"
#include "kato/problems.hpp"

namespace kato {

enum class SchemeKind { Greedy1, BrZ1, Greedy2, Rich2, Rich3, Greedy3, Lifted };

/// A one-step continuation rule. Lifted(base) is the Richardson extrapolant
/// of `base` over a doubled step and gains one order.
class SchemeSpec {
public:
    static SchemeSpec greedy1() { return SchemeSpec(SchemeKind::Greedy1); }
    static SchemeSpec brz1() { return SchemeSpec(SchemeKind::BrZ1); }
    static SchemeSpec greedy2() { return SchemeSpec(SchemeKind::Greedy2); }
    static SchemeSpec rich2() { return SchemeSpec(SchemeKind::Rich2); }
    static SchemeSpec rich3() { return SchemeSpec(SchemeKind::Rich3); }
    static SchemeSpec greedy3() { return SchemeSpec(SchemeKind::Greedy3); }
    static SchemeSpec lifted(const SchemeSpec& base);

    /// Parses "greedy1", "brz1", "greedy2", "rich2", "rich3", "greedy3" or
    /// "lift:<id>" (nestable). Schemes above max_order are rejected.
    static SchemeSpec parse(std::string_view id, int max_order = 1 << 20);

    SchemeKind kind() const { return kind_; }
    /// Only valid for Lifted.
    const SchemeSpec& base() const;
    int nominal_order() const;
    std::string id() const;

    /// Distinct chord fractions in [0, 1] at which one step reads P.
    std::vector<double> sample_fractions() const;
    /// n x n by n x k products per step.
    int mults_per_step() const;
    /// E.g. "1E+1M": projector operands and multiplications per step.
    std::string cost_signature() const;

    friend bool operator==(const SchemeSpec& a, const SchemeSpec& b);

private:
    explicit SchemeSpec(SchemeKind kind) : kind_(kind) {}

    SchemeKind kind_;
    std::shared_ptr<const SchemeSpec> base_;
};

/// Schemes with a closed form, in taxonomy order.
std::vector<SchemeSpec> builtin_schemes();

/// Same as SchemeSpec::lifted.
SchemeSpec richardson_lift(const SchemeSpec& base);

struct RichardsonCoefficients {
    double composed;  // 2^m / (2^m - 1), weight of two half steps
    double full;      // 1 / (2^m - 1), weight of one full step
};

RichardsonCoefficients richardson_coefficients(int base_order);

/// A chord [start, end] of the mesh, or a sub-interval of one addressed in
/// the parent chord's fractional coordinate. Points are always computed as
/// start + t (end - start) with t the parent fraction, t = 0 and t = 1 mapping
/// to the endpoints exactly, so nested and closed-form evaluations coincide.
class Segment {
public:
    Segment(Complex start, Complex end) : start_(start), end_(end) {}

    Complex point(double frac) const;
    Segment sub(double from, double to) const;

    Complex start() const { return point(0.0); }
    Complex end() const { return point(1.0); }

private:
    Segment(Complex start, Complex end, double t0, double t1)
        : start_(start), end_(end), t0_(t0), t1_(t1) {}

    Complex start_;
    Complex end_;
    double t0_ = 0.0;
    double t1_ = 1.0;
};

struct CostCounters {
    /// Projector operands consumed, counted per step as distinct points.
    std::int64_t p_evals = 0;
    /// Evaluations actually performed; cached points are not re-evaluated.
    std::int64_t p_evals_fresh = 0;
    std::int64_t mat_mults = 0;
    std::int64_t steps = 0;
};

/// Memoises P(lambda) by exact complex value, so consecutive steps on a
/// fixed mesh share P at their common point. Confined to one run.
class ProjectorCache {
public:
    explicit ProjectorCache(const ProjectorFamily& family) : family_(&family) {}

    const CMatrix& get(Complex lambda, CostCounters& counters);
    const ProjectorFamily& family() const { return *family_; }

private:
    const ProjectorFamily* family_;
    std::map<std::pair<double, double>, CMatrix> values_;
};

/// Everything a step operator reads: projector access and counters.
class StepContext {
public:
    StepContext(ProjectorCache& cache, CostCounters& counters)
        : cache_(&cache), counters_(&counters) {}

    const CMatrix& projector(const Segment& seg, double frac);
    /// p * x, counted as one multiplication.
    CMatrix apply(const CMatrix& p, const CMatrix& x);

    /// Starts a top-level step: resets the distinct-point tally.
    void begin_step();
    /// Ends it: adds the distinct points to p_evals and bumps steps.
    void end_step();

    CostCounters& counters() { return *counters_; }

private:
    ProjectorCache* cache_;
    CostCounters* counters_;
    std::set<std::pair<double, double>> touched_;
};

/// Advances r over `seg` with `scheme`.
CMatrix advance(const SchemeSpec& scheme, StepContext& ctx, const Segment& seg, const CMatrix& r);

// Closed-form one-step maps. Arguments are the projectors at the points
// named by the parameter (p_j at the chord start, p_next at its end, p_half
// at the midpoint, ...). An optional counter tallies multiplications.

CMatrix step_greedy1(const CMatrix& p_next, const CMatrix& r, CostCounters* cost = nullptr);
CMatrix step_brz1(const CMatrix& p_j, const CMatrix& p_next, const CMatrix& r,
                  CostCounters* cost = nullptr);
CMatrix step_greedy2(const CMatrix& p_j, const CMatrix& p_next, const CMatrix& r,
                     CostCounters* cost = nullptr);
CMatrix step_rich2(const CMatrix& p_half, const CMatrix& p_next, const CMatrix& r,
                   CostCounters* cost = nullptr);
CMatrix step_rich3(const CMatrix& p_quarter, const CMatrix& p_half, const CMatrix& p_three_quarter,
                   const CMatrix& p_next, const CMatrix& r, CostCounters* cost = nullptr);
CMatrix step_greedy3(const CMatrix& p_j, const CMatrix& p_half, const CMatrix& p_next,
                     const CMatrix& r, CostCounters* cost = nullptr);

}  // namespace kato
