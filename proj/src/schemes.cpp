#include "kato/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "kato/errors.hpp"

namespace kato {

SchemeSpec SchemeSpec::lifted(const SchemeSpec& base) {
    SchemeSpec s(SchemeKind::Lifted);
    s.base_ = std::make_shared<const SchemeSpec>(base);
    return s;
}

SchemeSpec SchemeSpec::parse(std::string_view id, int max_order) {
    constexpr std::string_view lift_prefix = "lift:";
    SchemeSpec parsed = [&] {
        if (id.substr(0, lift_prefix.size()) == lift_prefix) {
            return lifted(parse(id.substr(lift_prefix.size())));
        }
        for (const SchemeSpec& s : builtin_schemes()) {
            if (s.id() == id) {
                return s;
            }
        }
        throw UsageError("unknown scheme '" + std::string(id) +
                         "'; known: greedy1, brz1, greedy2, rich2, rich3, greedy3, lift:<scheme>");
    }();
    if (parsed.nominal_order() > max_order) {
        throw UsageError("scheme '" + std::string(id) + "' has order " +
                         std::to_string(parsed.nominal_order()) + " > " +
                         std::to_string(max_order));
    }
    return parsed;
}

const SchemeSpec& SchemeSpec::base() const {
    if (kind_ != SchemeKind::Lifted) {
        throw UsageError("base(): scheme " + id() + " is not lifted");
    }
    return *base_;
}

int SchemeSpec::nominal_order() const {
    switch (kind_) {
        case SchemeKind::Greedy1:
        case SchemeKind::BrZ1:
            return 1;
        case SchemeKind::Greedy2:
        case SchemeKind::Rich2:
            return 2;
        case SchemeKind::Rich3:
        case SchemeKind::Greedy3:
            return 3;
        case SchemeKind::Lifted:
            return base_->nominal_order() + 1;
    }
    return 0;
}

std::string SchemeSpec::id() const {
    switch (kind_) {
        case SchemeKind::Greedy1:
            return "greedy1";
        case SchemeKind::BrZ1:
            return "brz1";
        case SchemeKind::Greedy2:
            return "greedy2";
        case SchemeKind::Rich2:
            return "rich2";
        case SchemeKind::Rich3:
            return "rich3";
        case SchemeKind::Greedy3:
            return "greedy3";
        case SchemeKind::Lifted:
            return "lift:" + base_->id();
    }
    return {};
}

std::vector<double> SchemeSpec::sample_fractions() const {
    switch (kind_) {
        case SchemeKind::Greedy1:
            return {1.0};
        case SchemeKind::BrZ1:
        case SchemeKind::Greedy2:
            return {0.0, 1.0};
        case SchemeKind::Rich2:
            return {0.5, 1.0};
        case SchemeKind::Rich3:
            return {0.25, 0.5, 0.75, 1.0};
        case SchemeKind::Greedy3:
            return {0.0, 0.5, 1.0};
        case SchemeKind::Lifted: {
            std::vector<double> out;
            for (double f : base_->sample_fractions()) {
                out.push_back(0.5 * f);
                out.push_back(0.5 + 0.5 * f);
                out.push_back(f);
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }
    }
    return {};
}

int SchemeSpec::mults_per_step() const {
    switch (kind_) {
        case SchemeKind::Greedy1:
            return 1;
        case SchemeKind::BrZ1:
        case SchemeKind::Greedy2:
            return 3;
        case SchemeKind::Rich2:
            return 2;
        case SchemeKind::Rich3:
            return 5;
        case SchemeKind::Greedy3:
            return 8;
        case SchemeKind::Lifted:
            return 3 * base_->mults_per_step();
    }
    return 0;
}

std::string SchemeSpec::cost_signature() const {
    return std::to_string(sample_fractions().size()) + "E+" + std::to_string(mults_per_step()) +
           "M";
}

bool operator==(const SchemeSpec& a, const SchemeSpec& b) { return a.id() == b.id(); }

std::vector<SchemeSpec> builtin_schemes() {
    return {SchemeSpec::greedy1(), SchemeSpec::brz1(),  SchemeSpec::greedy2(),
            SchemeSpec::rich2(),   SchemeSpec::rich3(), SchemeSpec::greedy3()};
}

SchemeSpec richardson_lift(const SchemeSpec& base) { return SchemeSpec::lifted(base); }

RichardsonCoefficients richardson_coefficients(int base_order) {
    if (base_order < 1) {
        throw UsageError("richardson_coefficients: order must be >= 1");
    }
    const double pow2 = std::ldexp(1.0, base_order);
    return {pow2 / (pow2 - 1.0), 1.0 / (pow2 - 1.0)};
}

Complex Segment::point(double frac) const {
    const double t = t0_ + frac * (t1_ - t0_);
    if (t == 0.0) {
        return start_;
    }
    if (t == 1.0) {
        return end_;
    }
    return start_ + t * (end_ - start_);
}

Segment Segment::sub(double from, double to) const {
    return Segment(start_, end_, t0_ + from * (t1_ - t0_), t0_ + to * (t1_ - t0_));
}

const CMatrix& ProjectorCache::get(Complex lambda, CostCounters& counters) {
    const std::pair key{lambda.real(), lambda.imag()};
    auto it = values_.find(key);
    if (it == values_.end()) {
        it = values_.emplace(key, family_->eval(lambda).matrix()).first;
        ++counters.p_evals_fresh;
    }
    return it->second;
}

const CMatrix& StepContext::projector(const Segment& seg, double frac) {
    const Complex lambda = seg.point(frac);
    touched_.emplace(lambda.real(), lambda.imag());
    return cache_->get(lambda, *counters_);
}

CMatrix StepContext::apply(const CMatrix& p, const CMatrix& x) {
    ++counters_->mat_mults;
    return p * x;
}

void StepContext::begin_step() { touched_.clear(); }

void StepContext::end_step() {
    counters_->p_evals += static_cast<std::int64_t>(touched_.size());
    ++counters_->steps;
    touched_.clear();
}

namespace {

CMatrix mul(const CMatrix& p, const CMatrix& x, CostCounters* cost) {
    if (cost != nullptr) {
        ++cost->mat_mults;
    }
    return p * x;
}

}  // namespace

CMatrix step_greedy1(const CMatrix& p_next, const CMatrix& r, CostCounters* cost) {
    return mul(p_next, r, cost);
}

// P_{j+1} (I + P_j (I - P_{j+1})) R_j
CMatrix step_brz1(const CMatrix& p_j, const CMatrix& p_next, const CMatrix& r,
                  CostCounters* cost) {
    const CMatrix off = r - mul(p_next, r, cost);
    return mul(p_next, r + mul(p_j, off, cost), cost);
}

// P_{j+1} (I + 1/2 P_j (I - P_{j+1})) R_j
CMatrix step_greedy2(const CMatrix& p_j, const CMatrix& p_next, const CMatrix& r,
                     CostCounters* cost) {
    const CMatrix off = r - mul(p_next, r, cost);
    return mul(p_next, r + 0.5 * mul(p_j, off, cost), cost);
}

// P_{j+1} (2 P_{j+1/2} - I) R_j
CMatrix step_rich2(const CMatrix& p_half, const CMatrix& p_next, const CMatrix& r,
                   CostCounters* cost) {
    return mul(p_next, 2.0 * mul(p_half, r, cost) - r, cost);
}

// P_{j+1} [ 4/3 (2P_{3/4} - I) P_{1/2} (2P_{1/4} - I) - 1/3 (2P_{1/2} - I) ] R_j
CMatrix step_rich3(const CMatrix& p_quarter, const CMatrix& p_half, const CMatrix& p_three_quarter,
                   const CMatrix& p_next, const CMatrix& r, CostCounters* cost) {
    const CMatrix a = 2.0 * mul(p_quarter, r, cost) - r;
    const CMatrix b = mul(p_half, a, cost);
    const CMatrix c = 2.0 * mul(p_three_quarter, b, cost) - b;
    const CMatrix d = 2.0 * mul(p_half, r, cost) - r;
    return mul(p_next, (4.0 / 3.0) * c - (1.0 / 3.0) * d, cost);
}

// P_{j+1} [ 4/3 (I + 1/2 P_{1/2}(I - P_{j+1})) P_{1/2} (I + 1/2 P_j (I - P_{1/2}))
//           - 1/3 (I + 1/2 P_j (I - P_{j+1})) ] R_j
CMatrix step_greedy3(const CMatrix& p_j, const CMatrix& p_half, const CMatrix& p_next,
                     const CMatrix& r, CostCounters* cost) {
    const CMatrix inner = r + 0.5 * mul(p_j, r - mul(p_half, r, cost), cost);
    const CMatrix y = mul(p_half, inner, cost);
    const CMatrix z = y + 0.5 * mul(p_half, y - mul(p_next, y, cost), cost);
    const CMatrix w = r + 0.5 * mul(p_j, r - mul(p_next, r, cost), cost);
    return mul(p_next, (4.0 / 3.0) * z - (1.0 / 3.0) * w, cost);
}

CMatrix advance(const SchemeSpec& scheme, StepContext& ctx, const Segment& seg, const CMatrix& r) {
    CostCounters* cost = &ctx.counters();
    switch (scheme.kind()) {
        case SchemeKind::Greedy1:
            return step_greedy1(ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::BrZ1:
            return step_brz1(ctx.projector(seg, 0.0), ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::Greedy2:
            return step_greedy2(ctx.projector(seg, 0.0), ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::Rich2:
            return step_rich2(ctx.projector(seg, 0.5), ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::Rich3:
            return step_rich3(ctx.projector(seg, 0.25), ctx.projector(seg, 0.5),
                              ctx.projector(seg, 0.75), ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::Greedy3:
            return step_greedy3(ctx.projector(seg, 0.0), ctx.projector(seg, 0.5),
                                ctx.projector(seg, 1.0), r, cost);
        case SchemeKind::Lifted: {
            // T^{m+1,2h} = 2^m/(2^m-1) T^{m,h}_{j+1} T^{m,h}_j - 1/(2^m-1) T^{m,2h}_j
            const SchemeSpec& base = scheme.base();
            const RichardsonCoefficients c = richardson_coefficients(base.nominal_order());
            const CMatrix first_half = advance(base, ctx, seg.sub(0.0, 0.5), r);
            const CMatrix both_halves = advance(base, ctx, seg.sub(0.5, 1.0), first_half);
            const CMatrix full = advance(base, ctx, seg, r);
            return c.composed * both_halves - c.full * full;
        }
    }
    throw UsageError("advance: unknown scheme");
}

}  // namespace kato
