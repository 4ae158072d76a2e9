#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "cgm/errors.hpp"

namespace cgm {

// Which relation between n and p the machine enforces.
//   strict_p_squared:     n >= p^2          (the usual CGM convention)
//   saukas_song_p2logp:   n >  p^2 log2 p   (assumed by the Saukas-Song analysis)
//   none:                 only n >= 1, p >= 1 (small correctness tests)
enum class CoarsenessCheck {
    strict_p_squared,
    saukas_song_p2logp,
    none,
};

inline const char* to_string(CoarsenessCheck c) {
    switch (c) {
    case CoarsenessCheck::strict_p_squared: return "strict_p_squared";
    case CoarsenessCheck::saukas_song_p2logp: return "saukas_song_p2logp";
    case CoarsenessCheck::none: return "none";
    }
    return "?";
}

struct CgmConfig {
    std::uint64_t n = 0;
    std::uint64_t p = 0;
    CoarsenessCheck coarseness_check = CoarsenessCheck::none;

    void validate() const {
        if (p < 1) throw config_error("CgmConfig: p must be >= 1");
        if (n < 1) throw config_error("CgmConfig: n must be >= 1");
        switch (coarseness_check) {
        case CoarsenessCheck::strict_p_squared:
            if (n < p * p) {
                throw config_error("CgmConfig: n >= p^2 required, n=" +
                                   std::to_string(n) + " p=" + std::to_string(p));
            }
            break;
        case CoarsenessCheck::saukas_song_p2logp:
            if (static_cast<double>(n) <=
                static_cast<double>(p) * static_cast<double>(p) *
                    std::log2(static_cast<double>(p))) {
                throw config_error("CgmConfig: n > p^2 log2 p required, n=" +
                                   std::to_string(n) + " p=" + std::to_string(p));
            }
            break;
        case CoarsenessCheck::none:
            break;
        }
    }

    bool satisfies(CoarsenessCheck check) const {
        CgmConfig probe{n, p, check};
        try {
            probe.validate();
        } catch (const config_error&) {
            return false;
        }
        return true;
    }
};

} // namespace cgm
