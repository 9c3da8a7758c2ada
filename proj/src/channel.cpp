#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crossim {

ChannelTrace::ChannelTrace(std::vector<TraceSample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::runtime_error("channel trace: no samples");
    if (samples_.front().t != 0) throw std::runtime_error("channel trace: first sample must be at t=0");
    for (size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].capacity_bps < 0.0)
            throw std::runtime_error("channel trace: negative capacity");
        if (samples_[i].mac_loss_prob < 0.0 || samples_[i].mac_loss_prob > 1.0)
            throw std::runtime_error("channel trace: mac_loss_prob outside [0,1]");
        if (i > 0 && samples_[i].t <= samples_[i - 1].t)
            throw std::runtime_error("channel trace: samples not strictly increasing in t");
    }
}

const TraceSample& ChannelTrace::at(SimTime t) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](SimTime v, const TraceSample& s) { return v < s.t; });
    return *(it - 1);
}

std::optional<SimTime> ChannelTrace::next_active_time(SimTime t) const {
    for (const auto& s : samples_) {
        if (s.t > t && s.capacity_bps > 0.0) return s.t;
    }
    return std::nullopt;
}

double ChannelTrace::mean_capacity_bps(SimTime horizon) const {
    double integral = 0.0;
    for (size_t i = 0; i < samples_.size(); ++i) {
        SimTime begin = std::min(samples_[i].t, horizon);
        SimTime end = i + 1 < samples_.size() ? std::min(samples_[i + 1].t, horizon) : horizon;
        if (end > begin) integral += samples_[i].capacity_bps * to_s(end - begin);
    }
    return integral / to_s(horizon);
}

namespace {

bool looks_like_header(const std::string& line) {
    return line.find_first_not_of("0123456789.,+-eE \t\r") != std::string::npos;
}

}  // namespace

ChannelTrace ChannelTrace::load(std::istream& in) {
    std::vector<TraceSample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && looks_like_header(line)) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected 6 fields");
        TraceSample s;
        try {
            s.t = from_us(std::stoll(fields[0]));
            s.capacity_bps = std::stod(fields[1]);
            s.base_owd = from_us(std::stoll(fields[2]));
            s.mac_loss_prob = std::stod(fields[3]);
            s.max_harq_retx = std::stoi(fields[4]);
            s.harq_retx_delay = from_us(std::stoll(fields[5]));
        } catch (const std::exception&) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": malformed field");
        }
        if (s.capacity_bps < 0.0)
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": negative capacity");
        if (!samples.empty() && s.t <= samples.back().t)
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": timestamps not increasing");
        samples.push_back(s);
    }
    if (samples.empty()) throw std::runtime_error("trace: empty input");
    return ChannelTrace(std::move(samples));
}

ChannelTrace ChannelTrace::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trace: cannot open " + path);
    return load(in);
}

ChannelTrace ChannelTrace::synth_los_nlos(const LosNlosParams& p) {
    if (p.los_duration_s <= 0.0 || p.nlos_duration_s <= 0.0 || p.total_duration_s <= 0.0)
        throw std::runtime_error("synth_los_nlos: durations must be positive");
    if (p.nlos_capacity_bps > p.los_capacity_bps)
        throw std::runtime_error("synth_los_nlos: nlos capacity exceeds los capacity");
    std::vector<TraceSample> samples;
    SimTime total = from_s(p.total_duration_s);
    SimTime t = 0;
    bool los = true;
    while (t < total) {
        TraceSample s;
        s.t = t;
        s.capacity_bps = los ? p.los_capacity_bps : p.nlos_capacity_bps;
        s.mac_loss_prob = los ? p.los_loss_prob : p.nlos_loss_prob;
        s.base_owd = p.base_owd;
        s.max_harq_retx = p.max_harq_retx;
        s.harq_retx_delay = p.harq_retx_delay;
        samples.push_back(s);
        t += from_s(los ? p.los_duration_s : p.nlos_duration_s);
        los = !los;
    }
    return ChannelTrace(std::move(samples));
}

DeliveryOutcome transmit(const Packet& pkt, SimTime now, const ChannelTrace& trace,
                         RandomStream& mac_loss_stream) {
    const TraceSample& s = trace.at(now);
    if (s.capacity_bps <= 0.0)
        throw std::logic_error("transmit: called with zero capacity; caller must stall");
    auto serialization =
        static_cast<SimTime>(std::llround(static_cast<double>(pkt.size) * 8.0 * 1e9 / s.capacity_bps));
    DeliveryOutcome out;
    int failures = 0;
    bool ok = false;
    for (int attempt = 0; attempt <= s.max_harq_retx; ++attempt) {
        if (!mac_loss_stream.bernoulli(s.mac_loss_prob)) {
            ok = true;
            break;
        }
        ++failures;
    }
    out.attempts = std::min(failures + 1, s.max_harq_retx + 1);
    if (ok) {
        out.delivered = true;
        out.link_busy_until = now + serialization + failures * s.harq_retx_delay;
        out.deliver_at = out.link_busy_until + s.base_owd;
    } else {
        out.delivered = false;
        out.link_busy_until = now + serialization + s.max_harq_retx * s.harq_retx_delay;
    }
    return out;
}

}  // namespace crossim
