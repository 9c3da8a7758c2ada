// Minimal sender/receiver loopback for transport tests: fixed one-way delay,
// optional FIFO bottleneck rate (infinite buffer), a drop filter, and a
// packet mangler for CE marking.
#pragma once

#include <functional>
#include <memory>

#include "event_queue.hpp"
#include "transport.hpp"

namespace pipe_harness {

using namespace crossim;

class Pipe {
  public:
    explicit Pipe(SenderConfig cfg, SimTime owd = 4 * kMillisecond, double rate_bps = 0.0)
        : owd_(owd), rate_bps_(rate_bps) {
        receiver_ = std::make_unique<Receiver>(cfg.flow_id, [this](const AckRecord& ack) {
            engine.schedule(engine.now() + owd_, [this, ack] { sender_->on_ack(ack); });
        });
        sender_ = std::make_unique<Sender>(cfg, engine, [this](Packet pkt) {
            if (drop_filter && drop_filter(pkt)) return;
            if (mangle) mangle(pkt);
            SimTime start = engine.now();
            if (rate_bps_ > 0.0) {
                start = std::max(start, next_free_);
                auto ser = static_cast<SimTime>(static_cast<double>(pkt.size) * 8.0 * 1e9 /
                                                rate_bps_);
                next_free_ = start + ser;
                start = next_free_;
            }
            engine.schedule(start + owd_,
                            [this, pkt] { receiver_->on_packet(pkt, engine.now()); });
        });
    }

    Sender& sender() { return *sender_; }
    Receiver& receiver() { return *receiver_; }

    EventQueue engine;
    std::function<bool(const Packet&)> drop_filter;
    std::function<void(Packet&)> mangle;

  private:
    SimTime owd_;
    double rate_bps_;
    SimTime next_free_ = 0;
    std::unique_ptr<Receiver> receiver_;
    std::unique_ptr<Sender> sender_;
};

}  // namespace pipe_harness
