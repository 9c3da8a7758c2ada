#include "runner.hpp"

#include <cassert>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "channel.hpp"
#include "event_queue.hpp"
#include "random.hpp"
#include "rlc_queue.hpp"
#include "transport.hpp"

namespace crossim {

namespace {

// Downlink bottleneck: one packet in the air at a time, fed round-robin from
// the per-flow queues. Stalls while the trace reports zero capacity.
class BottleneckLink {
  public:
    BottleneckLink(EventQueue& engine, const ChannelTrace& trace, RoundRobinScheduler& sched,
                   RandomStream& mac_stream,
                   std::function<void(const Packet&, SimTime)> deliver,
                   std::function<void(const Packet&)> on_mac_loss)
        : engine_(engine),
          trace_(trace),
          sched_(sched),
          mac_stream_(mac_stream),
          deliver_(std::move(deliver)),
          on_mac_loss_(std::move(on_mac_loss)) {}

    void kick() {
        if (busy_) return;
        SimTime now = engine_.now();
        const TraceSample& ts = trace_.at(now);
        if (ts.capacity_bps <= 0.0) {
            if (!stall_armed_) {
                if (auto t = trace_.next_active_time(now)) {
                    stall_armed_ = true;
                    engine_.schedule(*t, [this] {
                        stall_armed_ = false;
                        kick();
                    });
                }
            }
            return;
        }
        auto pkt = sched_.dequeue(now);
        if (!pkt) return;
        DeliveryOutcome out = transmit(*pkt, now, trace_, mac_stream_);
        busy_ = true;
        engine_.schedule(out.link_busy_until, [this] {
            busy_ = false;
            kick();
        });
        if (out.delivered) {
            Packet delivered = *pkt;
            engine_.schedule(out.deliver_at,
                             [this, delivered] { deliver_(delivered, engine_.now()); });
        } else {
            on_mac_loss_(*pkt);
        }
    }

  private:
    EventQueue& engine_;
    const ChannelTrace& trace_;
    RoundRobinScheduler& sched_;
    RandomStream& mac_stream_;
    std::function<void(const Packet&, SimTime)> deliver_;
    std::function<void(const Packet&)> on_mac_loss_;
    bool busy_ = false;
    bool stall_armed_ = false;
};

struct FlowRuntime {
    std::unique_ptr<RandomStream> size_stream;
    std::unique_ptr<RandomStream> jitter_stream;
    std::unique_ptr<RandomStream> red_stream;
    std::unique_ptr<RandomStream> l4s_stream;
    std::unique_ptr<FlowQueue> queue;
    std::unique_ptr<Sender> sender;
    std::unique_ptr<Receiver> receiver;
    std::unique_ptr<VbrSource> vbr;
    std::unique_ptr<HasClient> has;
    std::uint64_t mac_losses = 0;
    std::vector<std::pair<SimTime, double>> btl_bw_series;
    std::vector<std::pair<SimTime, SimTime>> rt_prop_series;
};

std::string csv_double(double v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

}  // namespace

RunResult run_scenario(const Scenario& sc) {
    EventQueue engine;
    ChannelTrace trace = sc.channel.synthetic ? ChannelTrace::synth_los_nlos(sc.channel.synth)
                                              : ChannelTrace::load_file(sc.channel.trace_file);
    const SimTime horizon = sc.horizon();
    const std::uint64_t capacity = sc.buffer.resolve_bytes();
    const std::size_t n = sc.flows.size();

    RandomStream mac_stream(sc.seed, "mac_loss");

    std::vector<FlowRuntime> rt(n);
    std::vector<FlowQueue*> queue_ptrs;
    for (std::size_t i = 0; i < n; ++i) {
        const FlowSpec& f = sc.flows[i];
        std::string suffix = "/" + std::to_string(i);
        rt[i].size_stream = std::make_unique<RandomStream>(sc.seed, "traffic_size" + suffix);
        rt[i].jitter_stream = std::make_unique<RandomStream>(sc.seed, "traffic_jitter" + suffix);
        rt[i].red_stream = std::make_unique<RandomStream>(sc.seed, "red_coin" + suffix);
        rt[i].l4s_stream = std::make_unique<RandomStream>(sc.seed, "l4s_coin" + suffix);
        rt[i].queue = std::make_unique<FlowQueue>(static_cast<int>(i), f.aqm.resolve(capacity),
                                                  capacity, rt[i].red_stream.get(),
                                                  rt[i].l4s_stream.get());
        queue_ptrs.push_back(rt[i].queue.get());
    }

    RoundRobinScheduler sched(queue_ptrs);
    BottleneckLink link(
        engine, trace, sched, mac_stream,
        [&](const Packet& pkt, SimTime now) { rt[pkt.flow_id].receiver->on_packet(pkt, now); },
        [&](const Packet& pkt) { ++rt[pkt.flow_id].mac_losses; });

    // Recurring callbacks must outlive the loop body that creates them.
    std::vector<std::unique_ptr<std::function<void()>>> recurring;
    auto make_recurring = [&recurring]() -> std::function<void()>* {
        recurring.push_back(std::make_unique<std::function<void()>>());
        return recurring.back().get();
    };

    for (std::size_t i = 0; i < n; ++i) {
        const FlowSpec& f = sc.flows[i];

        SenderConfig scfg;
        scfg.flow_id = static_cast<int>(i);
        scfg.mss = sc.mss;
        scfg.algo = f.cc;
        scfg.ecn = f.ecn;
        scfg.rto_only = f.rto_only;
        scfg.cc_opts.hystart = f.hystart;
        rt[i].sender = std::make_unique<Sender>(scfg, engine, [&, i](Packet pkt) {
            rt[i].queue->enqueue(pkt, engine.now());
            link.kick();
        });

        // ACKs ride a clean return path: one-way propagation only.
        rt[i].receiver = std::make_unique<Receiver>(
            static_cast<int>(i), [&, i](const AckRecord& ack) {
                SimTime owd = trace.at(engine.now()).base_owd;
                engine.schedule(engine.now() + owd,
                                [&, i, ack] { rt[i].sender->on_ack(ack); });
            });

        switch (f.app) {
            case AppMode::Vbr: {
                auto cfg = VbrSourceConfig::make(f.vbr_datarate_bps, f.vbr_fps);
                rt[i].vbr = std::make_unique<VbrSource>(cfg, rt[i].size_stream.get(),
                                                        rt[i].jitter_stream.get());
                auto* emit = make_recurring();
                *emit = [&, i, emit] {
                    Frame frame = rt[i].vbr->next_frame(engine.now());
                    rt[i].sender->app_write(frame.size_bytes);
                    if (frame.emit_at < horizon) engine.schedule(frame.emit_at, *emit);
                };
                engine.schedule(0, *emit);
                break;
            }
            case AppMode::Bulk:
                engine.schedule(0, [&, i] { rt[i].sender->app_write(1ULL << 50); });
                break;
            case AppMode::Has: {
                Ladder ladder = f.ladder_file.empty() ? Ladder::default_ladder()
                                                      : Ladder::load_file(f.ladder_file);
                rt[i].has = std::make_unique<HasClient>(
                    f.has, std::move(ladder), engine, [&, i](std::uint64_t bytes) {
                        // Request travels the clean uplink, then the server
                        // hands the segment to the transport.
                        SimTime owd = trace.at(engine.now()).base_owd;
                        engine.schedule(engine.now() + owd,
                                        [&, i, bytes] { rt[i].sender->app_write(bytes); });
                    });
                rt[i].receiver->set_inorder_sink([&, i](std::uint64_t bytes, SimTime now) {
                    rt[i].has->on_inorder_bytes(bytes, now);
                });
                engine.schedule(0, [&, i] { rt[i].has->start(); });
                break;
            }
        }

        // ARED adaptation clock.
        if (f.aqm.kind == AqmKind::Ared) {
            SimTime interval = from_s(f.aqm.ared_interval_s);
            auto* adapt = make_recurring();
            *adapt = [&, i, interval, adapt] {
                rt[i].queue->ared_adapt_tick();
                if (engine.now() + interval <= horizon)
                    engine.schedule(engine.now() + interval, *adapt);
            };
            engine.schedule(interval, *adapt);
        }

        // BBR estimator sampling for diagnostics.
        if (f.cc == CcAlgo::BbrLite) {
            SimTime step = 100 * kMillisecond;
            auto* sample = make_recurring();
            *sample = [&, i, step, sample] {
                auto* bbr = dynamic_cast<BbrLiteCc*>(&rt[i].sender->algorithm());
                if (bbr) {
                    rt[i].btl_bw_series.emplace_back(engine.now(), bbr->btl_bw_bps());
                    rt[i].rt_prop_series.emplace_back(engine.now(), bbr->rt_prop());
                }
                if (engine.now() + step <= horizon)
                    engine.schedule(engine.now() + step, *sample);
            };
            engine.schedule(step, *sample);
        }
    }

    RunSummary summary = engine.run_until(horizon);

    RunResult result;
    result.resolved_scenario = sc.resolved;
    result.config_hash = sc.config_hash();
    result.seed = sc.seed;
    result.summary = summary;
    result.horizon = horizon;
    result.metrics_window = sc.metrics_window;

    for (std::size_t i = 0; i < n; ++i) {
        const FlowSpec& f = sc.flows[i];
        FlowResult fr;
        fr.id = static_cast<int>(i);
        fr.cc_name = rt[i].sender->algorithm().name();
        fr.ecn = f.ecn;
        switch (f.aqm.kind) {
            case AqmKind::DropTail: fr.aqm_name = "droptail"; break;
            case AqmKind::Red: fr.aqm_name = "red"; break;
            case AqmKind::Ared: fr.aqm_name = "ared"; break;
            case AqmKind::Codel: fr.aqm_name = "codel"; break;
            case AqmKind::L4s: fr.aqm_name = "l4s"; break;
        }
        fr.aqm_mode = f.aqm.kind != AqmKind::DropTail && f.aqm.mode == ActionMode::Mark ? "mark"
                                                                                        : "drop";
        fr.transport_log = rt[i].sender->take_log();
        fr.srtt_samples = rt[i].sender->take_srtt_samples();
        fr.arrivals = rt[i].receiver->take_arrivals();
        fr.queue_log = rt[i].queue->take_log();
        fr.queue_counters = rt[i].queue->counters();

        fr.bytes_sent = rt[i].sender->bytes_sent_total();
        fr.bytes_retransmitted = rt[i].sender->bytes_retransmitted();
        fr.bytes_acked = rt[i].sender->bytes_acked();
        fr.rto_count = rt[i].sender->rto_count();
        fr.final_cwnd = rt[i].sender->cc().cwnd;
        fr.throughput_bps = static_cast<double>(fr.bytes_sent) * 8.0 / to_s(horizon);
        fr.goodput_bps = static_cast<double>(rt[i].receiver->cum_bytes()) * 8.0 / to_s(horizon);

        std::vector<double> srtt_us;
        srtt_us.reserve(fr.srtt_samples.size());
        for (const auto& s : fr.srtt_samples) srtt_us.push_back(to_us(s.first_acked - s.first_sent));
        fr.srtt_us = summarize(std::move(srtt_us));
        fr.jitter = jitter_stats(fr.arrivals);
        QueueStats qs = queue_stats(fr.queue_log);
        fr.qdelay_us = qs.qdelay_us;
        fr.btl_bw_series = std::move(rt[i].btl_bw_series);
        fr.rt_prop_series = std::move(rt[i].rt_prop_series);

        if (rt[i].has) {
            rt[i].has->finalize(horizon);
            fr.has_session = true;
            fr.qoe_log = rt[i].has->qoe_log();
            if (!fr.qoe_log.empty()) {
                fr.qoe = session_qoe(fr.qoe_log, rt[i].has->player(), horizon);
            }
            fr.downloaded_s = rt[i].has->player().downloaded_s();
            fr.played_s = rt[i].has->player().played_s(horizon);
            fr.buffer_end_s = rt[i].has->player().buffer_level_s(horizon);
        }
        fr.mac_losses = rt[i].mac_losses;
        result.flows.push_back(std::move(fr));
    }
    return result;
}

json RunResult::to_results_json() const {
    json flows_j = json::array();
    json sessions_j = json::array();
    double agg_goodput = 0.0, agg_throughput = 0.0, agg_srtt = 0.0;
    std::uint64_t agg_drops_aqm = 0, agg_drops_overflow = 0, agg_marks = 0;
    int srtt_flows = 0;

    for (const auto& f : flows) {
        json fj{{"id", f.id},
                {"cc", f.cc_name},
                {"ecn", f.ecn},
                {"aqm", f.aqm_name},
                {"aqm_mode", f.aqm_mode},
                {"throughput_bps", f.throughput_bps},
                {"goodput_bps", f.goodput_bps},
                {"srtt_us",
                 {{"mean", f.srtt_us.mean},
                  {"p50", f.srtt_us.p50},
                  {"p95", f.srtt_us.p95},
                  {"p99", f.srtt_us.p99},
                  {"count", f.srtt_us.count}}},
                {"jitter_us", f.jitter.mean_abs_dev_us},
                {"jitter_rfc3550_us", f.jitter.rfc3550_us},
                {"qdelay_us",
                 {{"mean", f.qdelay_us.mean},
                  {"p50", f.qdelay_us.p50},
                  {"p95", f.qdelay_us.p95},
                  {"p99", f.qdelay_us.p99}}},
                {"drops", {{"aqm", f.queue_counters.dropped_aqm},
                           {"overflow", f.queue_counters.dropped_overflow}}},
                {"marks", f.queue_counters.marked},
                {"bytes_sent", f.bytes_sent},
                {"bytes_retransmitted", f.bytes_retransmitted},
                {"rto_count", f.rto_count}};
        flows_j.push_back(fj);
        agg_goodput += f.goodput_bps;
        agg_throughput += f.throughput_bps;
        if (f.srtt_us.count > 0) {
            agg_srtt += f.srtt_us.mean;
            ++srtt_flows;
        }
        agg_drops_aqm += f.queue_counters.dropped_aqm;
        agg_drops_overflow += f.queue_counters.dropped_overflow;
        agg_marks += f.queue_counters.marked;

        if (f.has_session) {
            sessions_j.push_back(json{{"flow", f.id},
                                      {"mean_vmaf", f.qoe.mean_vmaf},
                                      {"rebuffer_duration_s", f.qoe.rebuffer_duration_s},
                                      {"rebuffer_count", f.qoe.rebuffer_count},
                                      {"startup_delay_s", f.qoe.startup_delay_s},
                                      {"mean_level", f.qoe.mean_level},
                                      {"level_switch_count", f.qoe.level_switch_count},
                                      {"segments", f.qoe.segments},
                                      {"downloaded_s", f.downloaded_s},
                                      {"played_s", f.played_s},
                                      {"buffer_end_s", f.buffer_end_s}});
        }
    }

    return json{{"run",
                 {{"config_hash", config_hash},
                  {"seed", seed},
                  {"events_fired", summary.events_fired},
                  {"final_clock_us", to_us(summary.final_clock)}}},
                {"scenario", resolved_scenario},
                {"flows", flows_j},
                {"sessions", sessions_j},
                {"aggregate",
                 {{"goodput_bps", agg_goodput},
                  {"throughput_bps", agg_throughput},
                  {"mean_srtt_us", srtt_flows > 0 ? agg_srtt / srtt_flows : 0.0},
                  {"drops_aqm", agg_drops_aqm},
                  {"drops_overflow", agg_drops_overflow},
                  {"marks", agg_marks}}}};
}

void RunResult::for_each_file(
    const std::function<void(const std::string&, const std::string&)>& fn) const {
    fn("results.json", to_results_json().dump(2) + "\n");

    for (const auto& f : flows) {
        {
            std::ostringstream os;
            os << "t_us,event,seq,cwnd_bytes,bytes_in_flight,srtt_us,detail\n";
            for (const auto& e : f.transport_log) {
                os << e.t / kMicrosecond << ',' << tp_event_name(e.event) << ',' << e.seq << ','
                   << static_cast<std::uint64_t>(std::llround(e.cwnd)) << ',' << e.bytes_in_flight
                   << ',' << e.srtt / kMicrosecond << ',' << (e.detail ? e.detail : "") << '\n';
            }
            fn("flow_" + std::to_string(f.id) + "_transport.csv", os.str());
        }
        {
            std::ostringstream os;
            os << "t_us,event,seq,size,occupancy_bytes,sojourn_us\n";
            for (const auto& e : f.queue_log) {
                const char* name = "";
                switch (e.type) {
                    case QueueEventType::Enqueue: name = "enqueue"; break;
                    case QueueEventType::Dequeue: name = "dequeue"; break;
                    case QueueEventType::DropAqm: name = "drop_aqm"; break;
                    case QueueEventType::DropOverflow: name = "drop_overflow"; break;
                    case QueueEventType::Mark: name = "mark"; break;
                }
                os << e.t / kMicrosecond << ',' << name << ',' << e.seq << ',' << e.size << ','
                   << e.occupancy << ',' << e.sojourn / kMicrosecond << '\n';
            }
            fn("flow_" + std::to_string(f.id) + "_queue.csv", os.str());
        }
        if (f.has_session) {
            std::ostringstream os;
            os << "segment_idx,level,vmaf,download_ms,buffer_ms_after,stall_ms_during\n";
            for (const auto& q : f.qoe_log) {
                os << q.segment_idx << ',' << q.level << ',' << csv_double(q.vmaf) << ','
                   << q.download_time / kMillisecond << ',' << q.buffer_after / kMillisecond << ','
                   << q.stall_during / kMillisecond << '\n';
            }
            fn("flow_" + std::to_string(f.id) + "_qoe.csv", os.str());
        }
    }
}

std::map<std::string, std::string> RunResult::render_files() const {
    std::map<std::string, std::string> files;
    for_each_file([&](const std::string& name, const std::string& contents) {
        files[name] = contents;
    });
    return files;
}

std::map<std::string, std::uint64_t> RunResult::file_hashes() const {
    std::map<std::string, std::uint64_t> hashes;
    for_each_file([&](const std::string& name, const std::string& contents) {
        hashes[name] = fnv1a64(contents);
    });
    return hashes;
}

std::string RunResult::run_dir_name() const {
    std::string name = resolved_scenario.value("name", std::string("run"));
    return name + "-" + config_hash + "-s" + std::to_string(seed);
}

std::string RunResult::write(const std::string& out_root) const {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(out_root) / run_dir_name();
    fs::create_directories(dir);
    for_each_file([&](const std::string& name, const std::string& contents) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << contents;
    });
    return dir.string();
}

}  // namespace crossim
