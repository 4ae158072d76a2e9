#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cgm/config.hpp"
#include "cgm/cost_ledger.hpp"
#include "cgm/errors.hpp"

namespace cgm {

// Deterministic simulation of a CGM(n,p): p processor-local segments plus
// a cost ledger.  Collectives are atomic steps applied to the whole
// machine; a Machine must not be mutated concurrently.  Independent
// Machine instances are safe in parallel.
//
// The network is abstract: costs come from the collective-operation
// theorems directly (broadcast O(p), gather Theta(N), semigroup
// Theta(n/p)), charged with coefficient 1.  A broadcast or semigroup
// result is returned by value; the returned value is what every
// processor holds afterwards.
template <class Key>
class Machine {
public:
    Machine(CgmConfig config, std::vector<std::vector<Key>> segments)
        : config_(config), segments_(std::move(segments)) {
        config_.validate();
        if (segments_.size() != config_.p) {
            throw config_error("Machine: expected " + std::to_string(config_.p) +
                               " segments, got " + std::to_string(segments_.size()));
        }
    }

    const CgmConfig& config() const { return config_; }
    std::uint64_t n() const { return config_.n; }
    std::uint64_t p() const { return config_.p; }
    const CostLedger& ledger() const { return ledger_; }
    const std::vector<std::vector<Key>>& segments() const { return segments_; }
    std::uint64_t rng_seed = 0;

    std::uint64_t remaining_count() const {
        std::uint64_t total = 0;
        for (const auto& seg : segments_) total += seg.size();
        return total;
    }

    std::uint64_t max_segment_length() const {
        std::size_t m = 0;
        for (const auto& seg : segments_) m = std::max(m, seg.size());
        return m;
    }

    // Sequential work performed inside processors by an algorithm step
    // (pivot computation at processor 0, in-segment compaction, ...).
    // For a step run by all processors in parallel, charge the maximum
    // per-processor count.
    void charge_local(std::uint64_t units) { ledger_.local_units += units; }

    // --- collectives ------------------------------------------------------

    // One unit of data from `source` to everyone: comm += p, one round.
    template <class T>
    T broadcast(std::size_t source, const T& payload) {
        require_proc(source);
        ledger_.comm_units += config_.p;
        ledger_.rounds += 1;
        return payload;
    }

    // Concatenate per-processor sequences at `dest`, ordered by source
    // processor index.  N = total record count; charged max(N, p): the
    // gather theorem presumes N = Omega(p), and any gather touches all
    // processors at least once.
    template <class T>
    std::vector<T> gather(std::size_t dest,
                          const std::vector<std::vector<T>>& per_proc) {
        require_proc(dest);
        if (per_proc.size() != config_.p) {
            throw index_error("gather: expected one sequence per processor");
        }
        std::uint64_t total = 0;
        for (const auto& items : per_proc) total += items.size();
        if (total < 1) throw empty_error("gather: nothing to gather");
        ledger_.comm_units += std::max<std::uint64_t>(total, config_.p);
        ledger_.rounds += 1;
        std::vector<T> out;
        out.reserve(total);
        for (const auto& items : per_proc) {
            out.insert(out.end(), items.begin(), items.end());
        }
        return out;
    }

    // Gather the machine's own segments (used by the post-loop step of
    // Saukas-Song).  Segments are left untouched; dest receives a copy.
    std::vector<Key> gather_segments(std::size_t dest) {
        return gather(dest, segments_);
    }

    // Fold of all elements across segments under an associative,
    // commutative op.  Implementation: local folds, gather of <= p
    // partials, sequential fold, broadcast of the result.  Charged as one
    // collective: local += max segment length, comm += 2p, rounds += 2.
    template <class Op>
    Key semigroup(Op op) {
        bool seen = false;
        Key acc{};
        for (const auto& seg : segments_) {
            for (const Key& x : seg) {
                acc = seen ? op(acc, x) : x;
                seen = true;
            }
        }
        if (!seen) throw empty_error("semigroup: no elements on the machine");
        ledger_.local_units += max_segment_length();
        ledger_.comm_units += 2 * config_.p;
        ledger_.rounds += 2;
        return acc;
    }

    // Per-processor count of elements satisfying `pred`.  Pure local scan:
    // local += max segment length, no communication, no round.
    template <class Pred>
    std::vector<std::uint64_t> local_map_count(Pred pred) {
        ledger_.local_units += max_segment_length();
        std::vector<std::uint64_t> counts(config_.p, 0);
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            for (const Key& x : segments_[i]) {
                if (pred(x)) counts[i] += 1;
            }
        }
        return counts;
    }

    // Per-processor (less, equal, greater) counts against a pivot in a
    // single scan; charged once at max segment length.
    std::vector<std::array<std::uint64_t, 3>> local_compare_counts(const Key& pivot) {
        ledger_.local_units += max_segment_length();
        std::vector<std::array<std::uint64_t, 3>> out(config_.p, {0, 0, 0});
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            for (const Key& x : segments_[i]) {
                if (x < pivot) out[i][0] += 1;
                else if (pivot < x) out[i][2] += 1;
                else out[i][1] += 1;
            }
        }
        return out;
    }

    // Per-processor pair (count below lo, count in [lo, hi]) in one scan.
    std::vector<std::array<std::uint64_t, 2>> local_interval_counts(const Key& lo,
                                                                    const Key& hi) {
        ledger_.local_units += max_segment_length();
        std::vector<std::array<std::uint64_t, 2>> out(config_.p, {0, 0});
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            for (const Key& x : segments_[i]) {
                if (x < lo) out[i][0] += 1;
                else if (!(hi < x)) out[i][1] += 1;
            }
        }
        return out;
    }

    // In-segment compaction: keep only elements satisfying `keep`.  The
    // explicit discard step of the algorithms; charged at the current max
    // segment length (sequential prefix/compaction pass per processor).
    template <class Pred>
    void compact_segments(Pred keep) {
        ledger_.local_units += max_segment_length();
        for (auto& seg : segments_) {
            seg.erase(std::remove_if(seg.begin(), seg.end(),
                                     [&](const Key& x) { return !keep(x); }),
                      seg.end());
        }
    }

    // Copy of the elements satisfying `pred`, per processor, segments
    // unchanged.  One local pass, charged at max segment length.
    template <class Pred>
    std::vector<std::vector<Key>> extract_matching(Pred pred) {
        ledger_.local_units += max_segment_length();
        std::vector<std::vector<Key>> out(config_.p);
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            for (const Key& x : segments_[i]) {
                if (pred(x)) out[i].push_back(x);
            }
        }
        return out;
    }

    // Remove exactly one occurrence of `value`; the owning processor with
    // the lowest index removes it (deterministic tie-break).  Position is
    // known from the preceding fold, so only the O(1) splice is charged.
    void remove_one_occurrence(const Key& value) {
        for (auto& seg : segments_) {
            auto it = std::find(seg.begin(), seg.end(), value);
            if (it != seg.end()) {
                *it = seg.back();
                seg.pop_back();
                ledger_.local_units += 1;
                return;
            }
        }
        throw empty_error("remove_one_occurrence: value not present");
    }

private:
    void require_proc(std::size_t idx) const {
        if (idx >= config_.p) {
            throw index_error("processor index " + std::to_string(idx) +
                              " out of range (p=" + std::to_string(config_.p) + ")");
        }
    }

    CgmConfig config_;
    std::vector<std::vector<Key>> segments_;
    CostLedger ledger_;
};

// Even distribution of `data` (length n) over p contiguous blocks of size
// floor(n/p) or ceil(n/p); the first n mod p segments get the extra
// element.  Ledger starts zeroed.
template <class Key>
Machine<Key> distribute_evenly(const std::vector<Key>& data, CgmConfig config) {
    config.validate();
    if (data.size() != config.n) {
        throw config_error("distribute_evenly: data length " +
                           std::to_string(data.size()) + " != n=" +
                           std::to_string(config.n));
    }
    std::vector<std::vector<Key>> segments(config.p);
    const std::uint64_t base = config.n / config.p;
    const std::uint64_t extra = config.n % config.p;
    std::size_t pos = 0;
    for (std::uint64_t i = 0; i < config.p; ++i) {
        const std::uint64_t len = base + (i < extra ? 1 : 0);
        segments[i].assign(data.begin() + pos, data.begin() + pos + len);
        pos += len;
    }
    return Machine<Key>(config, std::move(segments));
}

} // namespace cgm
