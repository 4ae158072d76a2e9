#pragma once

#include <cstdint>

namespace cgm {

// Accumulated cost of a simulated run, split into local computation time
// units and communication time units.  Rounds are counted separately:
// the round count alone does not determine communication time (a round
// may move p words or n/p words), which is exactly why both views are kept.
//
// Charge rules used throughout (unit coefficients):
//   broadcast            comm += p, rounds += 1
//   gather of N records  comm += max(N, p), rounds += 1
//   semigroup            local += max segment length, comm += 2p, rounds += 2
//   local parallel scan  local += max segment length
//   sequential work at one processor: local += exact operation count
struct CostLedger {
    std::uint64_t local_units = 0;
    std::uint64_t comm_units = 0;
    std::uint64_t rounds = 0;

    std::uint64_t total_units() const { return local_units + comm_units; }

    // The paper gives no constant relating a local operation to a
    // communication unit; this knob lets a caller weigh them without
    // changing the recorded columns.
    double weighted_total(double comm_weight) const {
        return static_cast<double>(local_units) +
               comm_weight * static_cast<double>(comm_units);
    }

    CostLedger& operator+=(const CostLedger& other) {
        local_units += other.local_units;
        comm_units += other.comm_units;
        rounds += other.rounds;
        return *this;
    }
};

} // namespace cgm
