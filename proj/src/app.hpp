#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "random.hpp"
#include "sim_time.hpp"

namespace crossim {

// ---------------------------------------------------------------------------
// Open-loop VBR video source (XR-style): truncated-Gaussian frame sizes at a
// fixed frame rate with truncated-Gaussian emission jitter.

struct VbrSourceConfig {
    double datarate_bps = 25e6;
    double fps = 60.0;
    TruncGaussParams size_dist;    // bytes
    TruncGaussParams jitter_dist;  // milliseconds

    // Fills size/jitter distributions from datarate and fps:
    // mean = datarate/fps/8, std = 0.15*mean, min = 67 B, max = 1.5*mean;
    // jitter (0, 2 ms) truncated to [-4, 4] ms.
    static VbrSourceConfig make(double datarate_bps, double fps);
};

struct Frame {
    std::uint32_t size_bytes = 0;
    SimTime emit_at = 0;
};

class VbrSource {
  public:
    VbrSource(const VbrSourceConfig& cfg, RandomStream* size_stream, RandomStream* jitter_stream);

    // Frame to emit now plus the time of the next emission (strictly later).
    Frame next_frame(SimTime now);

  private:
    VbrSourceConfig cfg_;
    RandomStream* size_stream_;
    RandomStream* jitter_stream_;
};

// ---------------------------------------------------------------------------
// Bitrate ladder.

struct LadderLevel {
    int index = 0;
    double bitrate_bps = 0.0;
    int width = 0;
    int height = 0;
    double vmaf = 0.0;
};

class Ladder {
  public:
    explicit Ladder(std::vector<LadderLevel> levels);

    const LadderLevel& level(int i) const { return levels_.at(i); }
    int size() const { return static_cast<int>(levels_.size()); }
    int top() const { return size() - 1; }

    // Ten levels, bitrates log-spaced 0.5 to 49 Mb/s, quality scores 31 to 97
    // interpolated linearly across the indices.
    static Ladder default_ladder();

    // CSV rows: index,bitrate_bps,width,height,vmaf (header optional).
    static Ladder load(std::istream& in);
    static Ladder load_file(const std::string& path);

  private:
    std::vector<LadderLevel> levels_;
};

// ---------------------------------------------------------------------------
// ABR decisions.

// Throughput-driven rule: mean of the last two per-segment estimates scaled
// by a safety factor; highest level whose bitrate fits, never below level 0.
int abr_con_decide(const std::deque<double>& throughput_history_bps, const Ladder& ladder,
                   double safety = 0.9);

// Stall prevention: below one segment of buffer go to level 0; below two,
// step one level down.
int stall_prevention(int level, double buffer_level_s, double segment_duration_s);

// ---------------------------------------------------------------------------
// Playback buffer and QoE accounting.

enum class PlayerPhase : std::uint8_t { Startup, Playing, Rebuffering };

struct QoeSegment {
    int segment_idx = 0;
    int level = 0;
    double vmaf = 0.0;
    SimTime download_time = 0;
    SimTime buffer_after = 0;  // media in the buffer after the segment landed
    SimTime stall_during = 0;  // rebuffer time accrued while downloading it
};

// Playback clock and stall accounting. Time advances via advance_to(); the
// buffer drains only while Playing, and stall time accrues only while
// Rebuffering (startup wait is a separate metric).
class Player {
  public:
    Player(double max_buffer_s, double startup_threshold_s);

    void advance_to(SimTime now);
    // A completed segment worth `duration_s` of media; returns the buffer
    // level after the (capped) add.
    double on_segment_added(double duration_s, SimTime now);

    PlayerPhase phase() const { return phase_; }
    double buffer_level_s(SimTime now) const;
    double rebuffer_duration_s(SimTime now) const;
    int rebuffer_count() const { return rebuffer_count_; }
    SimTime startup_done_at() const { return startup_done_at_; }  // -1 while waiting
    double played_s(SimTime now) const;
    double downloaded_s() const { return downloaded_s_; }

  private:
    double max_buffer_s_;
    double startup_threshold_s_;

    PlayerPhase phase_ = PlayerPhase::Startup;
    double buffer_at_mark_ = 0.0;  // seconds of media at mark_
    SimTime mark_ = 0;
    double played_accum_ = 0.0;
    double stall_accum_ = 0.0;
    SimTime stall_start_ = -1;
    int rebuffer_count_ = 0;
    SimTime startup_done_at_ = -1;
    double downloaded_s_ = 0.0;
};

// ---------------------------------------------------------------------------
// HAS session client: sequential segment requests, one outstanding at a time,
// throughput-driven level selection, playback/stall accounting.

class EventQueue;

class HasClient {
  public:
    enum class Abr : std::uint8_t { Con, ConPlus, Fixed };

    struct Config {
        double segment_duration_s = 2.0;
        double max_buffer_s = 6.0;
        double startup_threshold_s = 2.0;
        double safety = 0.9;
        Abr abr = Abr::ConPlus;
        int fixed_level = 0;
    };

    HasClient(const Config& cfg, Ladder ladder, EventQueue& engine,
              std::function<void(std::uint64_t)> request_bytes);

    void start();
    void on_inorder_bytes(std::uint64_t bytes, SimTime now);
    void finalize(SimTime horizon);

    const std::vector<QoeSegment>& qoe_log() const { return qoe_log_; }
    const Player& player() const { return player_; }
    Player& player() { return player_; }
    const Ladder& ladder() const { return ladder_; }
    int segments_completed() const { return static_cast<int>(qoe_log_.size()); }

  private:
    void request_segment(int level);
    void complete_segment(SimTime now);

    Config cfg_;
    Ladder ladder_;
    EventQueue& engine_;
    std::function<void(std::uint64_t)> request_bytes_;

    Player player_;
    std::deque<double> history_bps_;
    int current_level_ = 0;
    std::uint64_t segment_size_ = 0;
    std::uint64_t segment_received_ = 0;
    SimTime request_time_ = 0;
    double stall_at_request_ = 0.0;
    bool awaiting_segment_ = false;
    std::vector<QoeSegment> qoe_log_;
};

}  // namespace crossim
