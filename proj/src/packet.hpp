#pragma once

#include <cstdint>

#include "sim_time.hpp"

namespace crossim {

enum class Ecn : std::uint8_t { NotEct, Ect0, Ce };

// One transport datagram. `seq` is the first application byte offset carried,
// so cumulative ACKs and goodput accounting are byte-exact.
struct Packet {
    int flow_id = 0;
    std::uint64_t seq = 0;
    std::uint32_t size = 0;  // payload bytes
    Ecn ecn = Ecn::NotEct;
    bool retransmit = false;
    SimTime sent_at = 0;
    SimTime enqueued_at = 0;
    // Cumulative delivered-byte snapshot taken at send time (rate sampling).
    std::uint64_t delivered_at_send = 0;
};

}  // namespace crossim
