#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "event_queue.hpp"

namespace crossim {

VbrSourceConfig VbrSourceConfig::make(double datarate_bps, double fps) {
    VbrSourceConfig cfg;
    cfg.datarate_bps = datarate_bps;
    cfg.fps = fps;
    double mean = datarate_bps / fps / 8.0;
    cfg.size_dist = TruncGaussParams{mean, 0.15 * mean, 67.0, 1.5 * mean};
    cfg.jitter_dist = TruncGaussParams{0.0, 2.0, -4.0, 4.0};  // ms
    return cfg;
}

VbrSource::VbrSource(const VbrSourceConfig& cfg, RandomStream* size_stream,
                     RandomStream* jitter_stream)
    : cfg_(cfg), size_stream_(size_stream), jitter_stream_(jitter_stream) {}

Frame VbrSource::next_frame(SimTime now) {
    Frame f;
    f.size_bytes = static_cast<std::uint32_t>(
        std::llround(size_stream_->truncated_gaussian(cfg_.size_dist)));
    double jitter_ms = jitter_stream_->truncated_gaussian(cfg_.jitter_dist);
    SimTime period = static_cast<SimTime>(std::llround(1e9 / cfg_.fps));
    SimTime next = now + period + from_ms(jitter_ms);
    // Emission instants stay strictly increasing even under extreme jitter.
    if (next <= now) next = now + 1;
    return Frame{f.size_bytes, next};
}

Ladder::Ladder(std::vector<LadderLevel> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::runtime_error("ladder: empty");
    for (size_t i = 0; i < levels_.size(); ++i) {
        levels_[i].index = static_cast<int>(i);
        if (i > 0 && levels_[i].bitrate_bps <= levels_[i - 1].bitrate_bps)
            throw std::runtime_error("ladder: bitrates must be strictly increasing");
        if (i > 0 && levels_[i].vmaf < levels_[i - 1].vmaf)
            throw std::runtime_error("ladder: vmaf must be non-decreasing");
    }
}

Ladder Ladder::default_ladder() {
    const int n = 10;
    const double lo = 0.5e6, hi = 49e6;
    const double vmaf_lo = 31.0, vmaf_hi = 97.0;
    static const int res[n][2] = {{512, 288},   {640, 360},   {768, 432},  {960, 540},
                                  {1280, 720},  {1600, 900},  {1920, 1080}, {2560, 1440},
                                  {3200, 1800}, {3840, 2160}};
    std::vector<LadderLevel> levels;
    for (int i = 0; i < n; ++i) {
        LadderLevel l;
        l.index = i;
        l.bitrate_bps = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        l.width = res[i][0];
        l.height = res[i][1];
        l.vmaf = vmaf_lo + (vmaf_hi - vmaf_lo) * static_cast<double>(i) / (n - 1);
        levels.push_back(l);
    }
    return Ladder(std::move(levels));
}

Ladder Ladder::load(std::istream& in) {
    std::vector<LadderLevel> levels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.find("bitrate") != std::string::npos) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5)
            throw std::runtime_error("ladder line " + std::to_string(lineno) + ": expected 5 fields");
        LadderLevel l;
        try {
            l.index = std::stoi(fields[0]);
            l.bitrate_bps = std::stod(fields[1]);
            l.width = std::stoi(fields[2]);
            l.height = std::stoi(fields[3]);
            l.vmaf = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw std::runtime_error("ladder line " + std::to_string(lineno) + ": malformed field");
        }
        levels.push_back(l);
    }
    return Ladder(std::move(levels));
}

Ladder Ladder::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ladder: cannot open " + path);
    return load(in);
}

int abr_con_decide(const std::deque<double>& history_bps, const Ladder& ladder, double safety) {
    if (history_bps.empty()) return 0;
    double estimate = history_bps.back();
    if (history_bps.size() >= 2) {
        estimate = (history_bps[history_bps.size() - 1] + history_bps[history_bps.size() - 2]) / 2.0;
    }
    double budget = safety * estimate;
    int level = 0;
    for (int i = 0; i < ladder.size(); ++i) {
        if (ladder.level(i).bitrate_bps <= budget) level = i;
    }
    return level;
}

int stall_prevention(int level, double buffer_level_s, double segment_duration_s) {
    if (buffer_level_s < segment_duration_s) return 0;
    if (buffer_level_s < 2.0 * segment_duration_s) return std::max(level - 1, 0);
    return level;
}

// ------------------------------------------------------------------- Player

Player::Player(double max_buffer_s, double startup_threshold_s)
    : max_buffer_s_(max_buffer_s), startup_threshold_s_(startup_threshold_s) {}

void Player::advance_to(SimTime now) {
    if (phase_ != PlayerPhase::Playing) {
        mark_ = now;
        return;
    }
    double drained = to_s(now - mark_);
    if (drained < buffer_at_mark_) {
        buffer_at_mark_ -= drained;
        played_accum_ += drained;
    } else {
        // Ran dry mid-interval: the stall started exactly when the buffer hit 0.
        SimTime empty_at = mark_ + from_s(buffer_at_mark_);
        played_accum_ += buffer_at_mark_;
        buffer_at_mark_ = 0.0;
        phase_ = PlayerPhase::Rebuffering;
        ++rebuffer_count_;
        stall_start_ = empty_at;
    }
    mark_ = now;
}

double Player::on_segment_added(double duration_s, SimTime now) {
    advance_to(now);
    downloaded_s_ += duration_s;
    buffer_at_mark_ = std::min(buffer_at_mark_ + duration_s, max_buffer_s_);
    if (phase_ == PlayerPhase::Startup && buffer_at_mark_ >= startup_threshold_s_ - 1e-9) {
        phase_ = PlayerPhase::Playing;
        startup_done_at_ = now;
        mark_ = now;
    } else if (phase_ == PlayerPhase::Rebuffering &&
               buffer_at_mark_ >= startup_threshold_s_ - 1e-9) {
        stall_accum_ += to_s(now - stall_start_);
        stall_start_ = -1;
        phase_ = PlayerPhase::Playing;
        mark_ = now;
    }
    return buffer_at_mark_;
}

double Player::buffer_level_s(SimTime now) const {
    if (phase_ != PlayerPhase::Playing) return buffer_at_mark_;
    return std::max(0.0, buffer_at_mark_ - to_s(now - mark_));
}

double Player::rebuffer_duration_s(SimTime now) const {
    double total = stall_accum_;
    if (phase_ == PlayerPhase::Rebuffering && stall_start_ >= 0) total += to_s(now - stall_start_);
    return total;
}

double Player::played_s(SimTime now) const {
    double p = played_accum_;
    if (phase_ == PlayerPhase::Playing) p += std::min(to_s(now - mark_), buffer_at_mark_);
    return p;
}

// ---------------------------------------------------------------- HasClient

HasClient::HasClient(const Config& cfg, Ladder ladder, EventQueue& engine,
                     std::function<void(std::uint64_t)> request_bytes)
    : cfg_(cfg),
      ladder_(std::move(ladder)),
      engine_(engine),
      request_bytes_(std::move(request_bytes)),
      player_(cfg.max_buffer_s, cfg.startup_threshold_s) {
    if (cfg_.abr == Abr::Fixed) current_level_ = std::clamp(cfg_.fixed_level, 0, ladder_.top());
}

void HasClient::start() { request_segment(current_level_); }

void HasClient::request_segment(int level) {
    current_level_ = level;
    segment_size_ = static_cast<std::uint64_t>(
        std::llround(ladder_.level(level).bitrate_bps * cfg_.segment_duration_s / 8.0));
    segment_received_ = 0;
    request_time_ = engine_.now();
    stall_at_request_ = player_.rebuffer_duration_s(request_time_);
    awaiting_segment_ = true;
    request_bytes_(segment_size_);
}

void HasClient::on_inorder_bytes(std::uint64_t bytes, SimTime now) {
    if (!awaiting_segment_) return;
    segment_received_ += bytes;
    if (segment_received_ >= segment_size_) complete_segment(now);
}

void HasClient::complete_segment(SimTime now) {
    awaiting_segment_ = false;
    SimTime download_time = std::max<SimTime>(now - request_time_, 1);

    player_.advance_to(now);
    double buffer_after = player_.on_segment_added(cfg_.segment_duration_s, now);

    QoeSegment q;
    q.segment_idx = static_cast<int>(qoe_log_.size());
    q.level = current_level_;
    q.vmaf = ladder_.level(current_level_).vmaf;
    q.download_time = download_time;
    q.buffer_after = from_s(buffer_after);
    q.stall_during = from_s(player_.rebuffer_duration_s(now) - stall_at_request_);
    qoe_log_.push_back(q);

    history_bps_.push_back(static_cast<double>(segment_size_) * 8.0 / to_s(download_time));

    int next = current_level_;
    if (cfg_.abr != Abr::Fixed) {
        next = abr_con_decide(history_bps_, ladder_, cfg_.safety);
        if (cfg_.abr == Abr::ConPlus) {
            next = stall_prevention(next, player_.buffer_level_s(now), cfg_.segment_duration_s);
        }
    }

    // One outstanding request; hold off while another segment would not fit.
    double headroom = cfg_.max_buffer_s - cfg_.segment_duration_s;
    double level_now = player_.buffer_level_s(now);
    if (level_now <= headroom + 1e-9) {
        request_segment(next);
    } else {
        SimTime resume = now + from_s(level_now - headroom);
        engine_.schedule(resume, [this, next] { request_segment(next); });
    }
}

void HasClient::finalize(SimTime horizon) { player_.advance_to(horizon); }

}  // namespace crossim
