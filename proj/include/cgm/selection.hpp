#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgm/machine.hpp"
#include "cgm/sequential.hpp"

namespace cgm {

// Which route produced a selection result.
enum class SelectionPath {
    saukas_song_direct,
    finite_support,
    extreme_min_loop,
    extreme_max_loop,
    fast_interval,
    fallback_below,    // rank below the estimated interval
    fallback_above,    // rank above the estimated interval
    fallback_interval, // rank inside, but the interval held > n/p members
};

inline const char* to_string(SelectionPath p) {
    switch (p) {
    case SelectionPath::saukas_song_direct: return "saukas_song_direct";
    case SelectionPath::finite_support: return "finite_support";
    case SelectionPath::extreme_min_loop: return "extreme_min_loop";
    case SelectionPath::extreme_max_loop: return "extreme_max_loop";
    case SelectionPath::fast_interval: return "fast_interval";
    case SelectionPath::fallback_below: return "fallback_below";
    case SelectionPath::fallback_above: return "fallback_above";
    case SelectionPath::fallback_interval: return "fallback_interval";
    }
    return "?";
}

// Per-iteration pivot statistics of the reduction loop.  `remaining` is
// the count before this iteration's discard.
struct RoundCounts {
    std::uint64_t less = 0;
    std::uint64_t equal = 0;
    std::uint64_t greater = 0;
    std::uint64_t remaining = 0;
};

struct SaukasSongParams {
    // Loop exits once the remaining count drops to termination_factor * n/p.
    double termination_factor = 1.0;

    void validate() const {
        if (!(termination_factor >= 1.0)) {
            throw config_error("SaukasSongParams: termination_factor >= 1 required");
        }
    }
};

struct UniformParams {
    double d = 0.75;          // interval-width exponent, 0.5 < d < 1
    std::uint32_t small_c = 3; // extreme-rank threshold, O(1)

    void validate() const {
        if (!(d > 0.5 && d < 1.0)) {
            throw config_error("UniformParams: 0.5 < d < 1 required");
        }
        if (small_c < 1 || small_c > 16) {
            throw config_error("UniformParams: 1 <= small_c <= 16 required");
        }
    }
};

// The interval [lower, upper] expected to bracket the k-th order statistic
// of n Uniform[0,1] samples, plus the observed counts around it.
struct IntervalEstimate {
    double d = 0;
    double epsilon = 0;   // 1 - d
    double threshold = 0; // n^(1 - d/2)
    double lower = 0;     // 0 when k <= threshold
    double upper = 1;     // 1 when k >= n - threshold
    std::uint64_t below_count = 0;  // elements < lower
    std::uint64_t inside_count = 0; // elements in [lower, upper]
};

// Mean of the k-th order statistic of n Uniform[0,1] samples: k/(n+1).
inline double order_stat_mean(std::uint64_t n, std::uint64_t k) {
    if (n < 1 || k < 1 || k > n) {
        throw rank_error("order_stat_mean: need 1 <= k <= n");
    }
    return static_cast<double>(k) / static_cast<double>(n + 1);
}

// Variance of the same order statistic: k(n+1-k) / ((n+1)^2 (n+2)).
inline double order_stat_variance(std::uint64_t n, std::uint64_t k) {
    if (n < 1 || k < 1 || k > n) {
        throw rank_error("order_stat_variance: need 1 <= k <= n");
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return kd * (nd + 1 - kd) / ((nd + 1) * (nd + 1) * (nd + 2));
}

// Interval bounds for rank k of n Uniform[0,1] samples.  Pure function of
// (n, k, d); counts are left zero.
inline IntervalEstimate estimate_interval(std::uint64_t n, std::uint64_t k, double d) {
    if (!(d > 0.5 && d < 1.0)) throw domain_error("estimate_interval: 0.5 < d < 1 required");
    if (k < 1 || k > n) throw rank_error("estimate_interval: need 1 <= k <= n");
    IntervalEstimate est;
    est.d = d;
    est.epsilon = 1.0 - d;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    est.threshold = std::pow(nd, 1.0 - d / 2.0);
    est.lower = (kd <= est.threshold) ? 0.0 : (kd - est.threshold) / (nd + 1);
    est.upper = (kd >= nd - est.threshold) ? 1.0 : (kd + est.threshold) / (nd + 1);
    assert(est.lower <= est.upper);
    return est;
}

template <class Key>
struct SelectionOutcome {
    Key value{};
    SelectionPath path = SelectionPath::saukas_song_direct;
    std::vector<RoundCounts> trace;
    CostLedger ledger;
    std::optional<IntervalEstimate> interval;
};

namespace detail {

template <class Key>
struct ReductionResult {
    Key value{};
    std::vector<RoundCounts> trace;
};

// The Saukas-Song reduction loop plus its post-loop sequential finish,
// operating on whatever currently remains in the machine's segments.
// `termination_n` is the n of the enclosing problem: the loop exits once
// the remaining count is at most termination_factor * termination_n / p.
//
// One loop iteration, in machine steps:
//   (2.1) each processor: lower median of its remaining elements,
//         weighted by its remaining count       local += maxseg
//   (2.2) gather the <= p weighted medians      comm  += p
//   (2.3) weighted median of medians = pivot    local += #medians
//   (2.4) broadcast pivot                       comm  += p
//   (2.5) count (<, =, >) vs pivot per proc     local += maxseg
//   (2.6) gather the count triples              comm  += p
//   (2.7) sum triples into (L, E, G)            local += p
//   (2.8) broadcast (L, E, G)                   comm  += p
//   (2.9) return pivot if L < k <= L+E, else discard and compact
//                                               local += maxseg
// After the loop: gather the <= termination_factor*n/p survivors, select
// sequentially, broadcast the answer.
template <class Key>
ReductionResult<Key> saukas_song_core(Machine<Key>& m, std::uint64_t k,
                                      double termination_factor,
                                      std::uint64_t termination_n) {
    ReductionResult<Key> out;
    const std::uint64_t p = m.p();
    const double exit_below =
        termination_factor * static_cast<double>(termination_n) / static_cast<double>(p);

    std::uint64_t remaining = m.remaining_count();
    assert(k >= 1 && k <= remaining);

    while (static_cast<double>(remaining) > exit_below) {
        // (2.1) local lower medians, weighted by remaining count
        m.charge_local(m.max_segment_length());
        std::vector<std::vector<WeightedValue<Key>>> medians(p);
        for (std::size_t i = 0; i < p; ++i) {
            const auto& seg = m.segments()[i];
            if (seg.empty()) continue; // emptied by an earlier discard
            const Key med = select_kth(seg, (seg.size() + 1) / 2);
            medians[i].push_back({med, seg.size()});
        }

        // (2.2)-(2.4) pivot = weighted median of the medians
        const auto gathered = m.gather(0, medians);
        m.charge_local(gathered.size());
        const Key pivot = m.broadcast(0, weighted_median(gathered));

        // (2.5)-(2.8) global (L, E, G) against the pivot
        const auto triples = m.local_compare_counts(pivot);
        std::vector<std::vector<std::array<std::uint64_t, 3>>> per_proc(p);
        for (std::size_t i = 0; i < p; ++i) per_proc[i].push_back(triples[i]);
        const auto all = m.gather(0, per_proc);
        m.charge_local(p);
        RoundCounts rc;
        for (const auto& t : all) {
            rc.less += t[0];
            rc.equal += t[1];
            rc.greater += t[2];
        }
        rc.remaining = remaining;
        assert(rc.less + rc.equal + rc.greater == remaining);
        assert(rc.equal >= 1); // the pivot is a data element
        m.broadcast(0, rc);
        out.trace.push_back(rc);

        // (2.9) resolve or discard
        if (rc.less < k && k <= rc.less + rc.equal) {
            out.value = pivot;
            return out;
        }
        if (k <= rc.less) {
            m.compact_segments([&](const Key& x) { return x < pivot; });
            remaining = rc.less;
        } else {
            m.compact_segments([&](const Key& x) { return pivot < x; });
            k -= rc.less + rc.equal;
            remaining = rc.greater;
        }
        assert(k >= 1 && k <= remaining);
    }

    // (3)-(4) gather the survivors and finish sequentially
    const auto survivors = m.gather_segments(0);
    m.charge_local(survivors.size());
    out.value = m.broadcast(0, select_kth(survivors, k));
    return out;
}

template <class Key>
void require_rank(const Machine<Key>& m, std::uint64_t k) {
    const std::uint64_t n = m.remaining_count();
    if (k < 1 || k > n) {
        throw rank_error("selection: k=" + std::to_string(k) +
                         " out of range 1.." + std::to_string(n));
    }
}

} // namespace detail

// Saukas-Song selection on a CGM(n,p).  Worst case Theta(n log p / p)
// charged time; best case (first pivot already has rank k) one loop
// iteration, Theta(n/p).  Every processor holds the result at the end.
template <class Key>
SelectionOutcome<Key> saukas_song(Machine<Key>& m, std::uint64_t k,
                                  SaukasSongParams params = {}) {
    params.validate();
    detail::require_rank(m, k);

    SelectionOutcome<Key> out;
    out.path = SelectionPath::saukas_song_direct;
    if (m.p() == 1) {
        const auto& seg = m.segments()[0];
        m.charge_local(seg.size());
        out.value = select_kth(seg, k);
        out.ledger = m.ledger();
        return out;
    }
    auto run = detail::saukas_song_core(m, k, params.termination_factor, m.n());
    out.value = run.value;
    out.trace = std::move(run.trace);
    out.ledger = m.ledger();
    return out;
}

// Selection when all keys belong to a known finite support: per-processor
// bucket counting, one (batched) gather of the count vectors, prefix sums
// and a binary search at processor 0.  Theta(n/p) charged time for
// constant support cardinality.
//
// With faithful_loop the count vectors are gathered one support value per
// round (the literal per-m loop) and the chosen value itself is broadcast
// by an owning processor after the index broadcast; results are identical,
// only the ledger differs.
template <class Key>
SelectionOutcome<Key> finite_support_select(Machine<Key>& m, std::uint64_t k,
                                            const SupportSet<Key>& support,
                                            bool faithful_loop = false) {
    detail::require_rank(m, k);
    const std::uint64_t p = m.p();
    const std::uint64_t c = support.size();

    SelectionOutcome<Key> out;
    out.path = SelectionPath::finite_support;

    // local bucket counting: zero c counters, then scan the segment
    m.charge_local(m.max_segment_length() + c);
    std::vector<BucketCounts> local(p);
    for (std::size_t i = 0; i < p; ++i) {
        local[i] = bucket_count(m.segments()[i], support);
    }

    if (p == 1) {
        m.charge_local(c + std::bit_width(c));
        const std::size_t v = smallest_index_reaching(local[0], k);
        out.value = support.value_at(v);
        out.ledger = m.ledger();
        return out;
    }

    // combine per-processor counts at processor 0
    std::vector<std::uint64_t> combined(c, 0);
    if (faithful_loop) {
        for (std::size_t mIdx = 0; mIdx < c; ++mIdx) {
            std::vector<std::vector<std::uint64_t>> one(p);
            for (std::size_t j = 0; j < p; ++j) one[j].push_back(local[j].per_value[mIdx]);
            const auto counts = m.gather(0, one);
            m.charge_local(p);
            for (const auto v : counts) combined[mIdx] += v;
        }
    } else {
        std::vector<std::vector<std::uint64_t>> batched(p);
        for (std::size_t j = 0; j < p; ++j) batched[j] = local[j].per_value;
        const auto flat = m.gather(0, batched); // p*c records in one round
        m.charge_local(static_cast<std::uint64_t>(p) * c);
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t mIdx = 0; mIdx < c; ++mIdx) {
                combined[mIdx] += flat[j * c + mIdx];
            }
        }
    }

    // prefix sums, binary search, index broadcast
    m.charge_local(c);
    const BucketCounts totals = make_prefix(std::move(combined));
    m.charge_local(std::bit_width(c));
    const std::size_t v = m.broadcast(0, smallest_index_reaching(totals, k));
    out.value = support.value_at(v);
    if (faithful_loop) {
        // the support is known to all processors, so this broadcast is
        // redundant; kept only to mirror the literal cost structure
        out.value = m.broadcast(0, out.value);
    }
    out.ledger = m.ledger();
    return out;
}

// Expected-Theta(n/p) selection for keys uniformly distributed on [0,1].
// Extreme ranks are solved by repeated semigroup min/max extraction; the
// middle case brackets the k-th order statistic in the interval
// [lower, upper] from estimate_interval and resolves inside it when the
// bracket holds, falling back to Saukas-Song on the relevant sub-multiset
// otherwise.
template <class Key>
SelectionOutcome<Key> uniform_expected_select(Machine<Key>& m, std::uint64_t k,
                                              UniformParams params = {},
                                              SaukasSongParams ss_params = {}) {
    params.validate();
    ss_params.validate();
    detail::require_rank(m, k);
    const std::uint64_t n = m.remaining_count();
    const std::uint64_t p = m.p();

    for (const auto& seg : m.segments()) { // precondition, not a charged step
        for (const Key& x : seg) {
            if (x < Key(0) || Key(1) < x) {
                throw domain_error("uniform_expected_select: key outside [0,1]");
            }
        }
    }

    SelectionOutcome<Key> out;
    if (p == 1) {
        // degenerate machine: plain sequential selection, no communication
        const auto& seg = m.segments()[0];
        m.charge_local(seg.size());
        out.value = select_kth(seg, k);
        out.path = SelectionPath::fast_interval;
        out.ledger = m.ledger();
        return out;
    }

    if (k <= params.small_c) {
        // k passes of min-extraction; each pass leaves the minimum at
        // every processor, then removes that one occurrence
        Key current{};
        for (std::uint64_t i = 1; i <= k; ++i) {
            current = m.semigroup([](const Key& a, const Key& b) { return b < a ? b : a; });
            if (i < k) m.remove_one_occurrence(current);
        }
        out.value = current;
        out.path = SelectionPath::extreme_min_loop;
        out.ledger = m.ledger();
        return out;
    }
    if (k + params.small_c >= n) {
        Key current{};
        for (std::uint64_t i = n; i >= k; --i) {
            current = m.semigroup([](const Key& a, const Key& b) { return a < b ? b : a; });
            if (i > k) m.remove_one_occurrence(current);
        }
        out.value = current;
        out.path = SelectionPath::extreme_max_loop;
        out.ledger = m.ledger();
        return out;
    }

    // middle case: bracket the k-th order statistic
    m.charge_local(1); // O(1) bound computation per processor
    IntervalEstimate est = estimate_interval(n, k, params.d);
    const Key lo = static_cast<Key>(est.lower);
    const Key hi = static_cast<Key>(est.upper);

    const auto pairs = m.local_interval_counts(lo, hi);
    std::vector<std::vector<std::array<std::uint64_t, 2>>> per_proc(p);
    for (std::size_t i = 0; i < p; ++i) per_proc[i].push_back(pairs[i]);
    const auto all = m.gather(0, per_proc);
    m.charge_local(p);
    std::uint64_t below = 0, inside = 0;
    for (const auto& sm : all) {
        below += sm[0];
        inside += sm[1];
    }
    std::array<std::uint64_t, 2> sums{below, inside};
    sums = m.broadcast(0, sums);
    est.below_count = below;
    est.inside_count = inside;
    out.interval = est;

    const bool rank_inside = below < k && k <= below + inside;
    if (rank_inside && inside * p <= n) {
        // fast path: the bracket holds and fits in one processor
        auto members = m.extract_matching(
            [&](const Key& x) { return !(x < lo) && !(hi < x); });
        const auto gathered = m.gather(0, members);
        m.charge_local(gathered.size());
        out.value = m.broadcast(0, select_kth(gathered, k - below));
        out.path = SelectionPath::fast_interval;
        out.ledger = m.ledger();
        return out;
    }

    // fallback: Saukas-Song on the sub-multiset that must hold rank k;
    // the loop threshold keeps using the original n
    std::uint64_t sub_rank = 0;
    if (k <= below) {
        m.compact_segments([&](const Key& x) { return x < lo; });
        sub_rank = k;
        out.path = SelectionPath::fallback_below;
    } else if (k > below + inside) {
        m.compact_segments([&](const Key& x) { return hi < x; });
        sub_rank = k - (below + inside);
        out.path = SelectionPath::fallback_above;
    } else {
        // bracket holds but contains more than n/p members
        m.compact_segments([&](const Key& x) { return !(x < lo) && !(hi < x); });
        sub_rank = k - below;
        out.path = SelectionPath::fallback_interval;
    }
    auto run = detail::saukas_song_core(m, sub_rank, ss_params.termination_factor, n);
    out.value = run.value;
    out.trace = std::move(run.trace);
    out.ledger = m.ledger();
    return out;
}

} // namespace cgm
