#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgm/errors.hpp"

namespace cgm {

// Linear-time sequential building blocks used inside simulated processors.
// All kernels are pure functions.

namespace detail {

template <class Key>
Key median_of_small(std::vector<Key>& buf, std::size_t lo, std::size_t hi) {
    std::sort(buf.begin() + lo, buf.begin() + hi);
    const std::size_t len = hi - lo;
    return buf[lo + (len - 1) / 2]; // lower median
}

// In-place worst-case linear selection, classic median-of-medians with
// groups of 5 and a three-way partition (heavy ties stay linear).
// k is 1-based within [lo, hi).
template <class Key>
Key select_in_place(std::vector<Key>& buf, std::size_t lo, std::size_t hi,
                    std::uint64_t k) {
    for (;;) {
        const std::size_t len = hi - lo;
        if (len <= 5) {
            std::sort(buf.begin() + lo, buf.begin() + hi);
            return buf[lo + k - 1];
        }

        // medians of groups of 5
        std::vector<Key> medians;
        medians.reserve(len / 5 + 1);
        for (std::size_t g = lo; g < hi; g += 5) {
            medians.push_back(median_of_small(buf, g, std::min(g + 5, hi)));
        }
        const Key pivot =
            select_in_place(medians, 0, medians.size(),
                            (medians.size() + 1) / 2);

        // three-way partition of [lo, hi) around pivot
        std::size_t lt = lo, i = lo, gt = hi;
        while (i < gt) {
            if (buf[i] < pivot) {
                std::swap(buf[i], buf[lt]);
                ++lt;
                ++i;
            } else if (pivot < buf[i]) {
                --gt;
                std::swap(buf[i], buf[gt]);
            } else {
                ++i;
            }
        }
        const std::uint64_t less = lt - lo;
        const std::uint64_t equal = gt - lt;
        if (k <= less) {
            hi = lt;
        } else if (k <= less + equal) {
            return pivot;
        } else {
            k -= less + equal;
            lo = gt;
        }
    }
}

} // namespace detail

// k-th smallest under multiset order, 1-based; worst-case O(n).  Works on
// a scratch copy, so the caller's data is never reordered.
template <class Key>
Key select_kth(const std::vector<Key>& data, std::uint64_t k) {
    if (data.empty()) throw empty_error("select_kth: empty input");
    if (k < 1 || k > data.size()) {
        throw rank_error("select_kth: k=" + std::to_string(k) +
                         " out of range 1.." + std::to_string(data.size()));
    }
    std::vector<Key> buf(data);
    return detail::select_in_place(buf, 0, buf.size(), k);
}

template <class Key>
struct WeightedValue {
    Key value{};
    std::uint64_t weight = 1;
};

// Lower weighted median: the smallest value v such that the summed weight
// of items with value <= v reaches ceil(W/2).  Linear time via recursive
// partitioning around the (unweighted) median of the values.
template <class Key>
Key weighted_median(std::vector<WeightedValue<Key>> items) {
    if (items.empty()) throw empty_error("weighted_median: empty input");
    std::uint64_t total = 0;
    for (const auto& it : items) {
        if (it.weight < 1) throw domain_error("weighted_median: weight must be >= 1");
        total += it.weight;
    }
    std::uint64_t target = (total + 1) / 2; // ceil(W/2)

    std::size_t lo = 0, hi = items.size();
    for (;;) {
        if (hi - lo == 1) return items[lo].value;

        std::vector<Key> values;
        values.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) values.push_back(items[i].value);
        const Key pivot =
            detail::select_in_place(values, 0, values.size(),
                                    (values.size() + 1) / 2);

        // three-way partition of items by value
        std::size_t lt = lo, i = lo, gt = hi;
        std::uint64_t w_less = 0, w_equal = 0;
        while (i < gt) {
            if (items[i].value < pivot) {
                w_less += items[i].weight;
                std::swap(items[i], items[lt]);
                ++lt;
                ++i;
            } else if (pivot < items[i].value) {
                --gt;
                std::swap(items[i], items[gt]);
            } else {
                w_equal += items[i].weight;
                ++i;
            }
        }
        if (w_less >= target) {
            hi = lt;
        } else if (w_less + w_equal >= target) {
            return pivot;
        } else {
            target -= w_less + w_equal;
            lo = gt;
        }
    }
}

// Known finite support y_1 < y_2 < ... < y_c.  Construction validates
// strict ordering and the (configurable) cardinality cap.
template <class Key>
class SupportSet {
public:
    explicit SupportSet(std::vector<Key> values, std::size_t cap = 1024)
        : values_(std::move(values)) {
        if (values_.empty()) throw config_error("SupportSet: c >= 1 required");
        if (values_.size() > cap) {
            throw config_error("SupportSet: cardinality " +
                               std::to_string(values_.size()) +
                               " exceeds cap " + std::to_string(cap));
        }
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            if (!(values_[i] < values_[i + 1])) {
                throw config_error("SupportSet: values must be strictly increasing");
            }
        }
        index_.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) index_[values_[i]] = i;
    }

    std::size_t size() const { return values_.size(); }
    const std::vector<Key>& values() const { return values_; }
    const Key& value_at(std::size_t one_based) const { return values_[one_based - 1]; }

    // 0-based bucket index of x, or npos if x is not a member.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const Key& x) const {
        auto it = index_.find(x);
        return it == index_.end() ? npos : it->second;
    }

private:
    std::vector<Key> values_;
    std::unordered_map<Key, std::size_t> index_;
};

struct BucketCounts {
    std::vector<std::uint64_t> per_value; // n_m: multiplicity of y_m
    std::vector<std::uint64_t> prefix;    // N_m = sum of n_u for u <= m

    std::uint64_t total() const { return prefix.empty() ? 0 : prefix.back(); }
};

inline BucketCounts make_prefix(std::vector<std::uint64_t> per_value) {
    BucketCounts out;
    out.prefix.resize(per_value.size());
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < per_value.size(); ++i) {
        run += per_value[i];
        out.prefix[i] = run;
    }
    out.per_value = std::move(per_value);
    return out;
}

// Multiplicity of each support value in data, O(length + c).  Every
// element must be a member of the support.
template <class Key>
BucketCounts bucket_count(const std::vector<Key>& data, const SupportSet<Key>& support) {
    std::vector<std::uint64_t> per_value(support.size(), 0);
    for (const Key& x : data) {
        const std::size_t idx = support.index_of(x);
        if (idx == SupportSet<Key>::npos) {
            throw support_violation_error("bucket_count: element not in support");
        }
        per_value[idx] += 1;
    }
    return make_prefix(std::move(per_value));
}

// Minimal 1-based index v with k <= N_v, by binary search over the prefix
// sums.  The search range is 1 <= v <= c so that k = N_c is findable.
inline std::size_t smallest_index_reaching(const BucketCounts& counts, std::uint64_t k) {
    if (k < 1 || counts.prefix.empty() || k > counts.total()) {
        throw rank_error("smallest_index_reaching: k=" + std::to_string(k) +
                         " out of range 1.." + std::to_string(counts.total()));
    }
    auto it = std::lower_bound(counts.prefix.begin(), counts.prefix.end(), k);
    return static_cast<std::size_t>(it - counts.prefix.begin()) + 1;
}

} // namespace cgm
