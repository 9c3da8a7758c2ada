#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "random.hpp"
#include "rlc_queue.hpp"

namespace crossim {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw std::runtime_error("scenario: " + msg); }

json aqm_template() {
    return json{{"discipline", "droptail"}, {"mode", "drop"},
                {"min_th_pct", 90.0},       {"max_th_pct", 100.0},
                {"min_th_bytes", nullptr},  {"max_th_bytes", nullptr},
                {"p_max", 0.1},             {"w_q", 0.002},
                {"interval_s", 0.5},        {"alpha_inc", nullptr},
                {"beta_dec", 0.9},          {"target_low_pct", nullptr},
                {"target_high_pct", nullptr},
                {"target_ms", 10.0},        {"interval_ms", 100.0},
                {"low_th_ms", 10.0},        {"high_th_ms", 25.0},
                {"alpha", 0.25},            {"dt_ms", 1.0}};
}

json has_template() {
    return json{{"segment_duration_s", 2.0}, {"max_buffer_s", 6.0},
                {"startup_threshold_s", 2.0}, {"safety", 0.9},
                {"abr", "con_plus"},          {"fixed_level", 0},
                {"ladder_file", ""}};
}

json flow_template() {
    return json{{"app", "vbr"},     {"cc", "cubic"},  {"ecn", false},
                {"rto_only", false}, {"hystart", true}, {"aqm", nullptr},
                {"vbr", {{"datarate_bps", 25e6}, {"fps", 60.0}}},
                {"has", has_template()}};
}

json scenario_template() {
    return json{
        {"name", ""},
        {"horizon_s", 100.0},
        {"seed", 1},
        {"mss_bytes", 1200},
        {"channel",
         {{"trace_file", nullptr},
          {"synth",
           {{"los_capacity_bps", 500e6},
            {"nlos_capacity_bps", 100e6},
            {"los_duration_s", 20.0},
            {"nlos_duration_s", 20.0},
            {"los_loss_prob", 0.0},
            {"nlos_loss_prob", 0.0},
            {"base_owd_us", 4000},
            {"max_harq_retx", 3},
            {"harq_retx_delay_us", 1000}}}}},
        {"buffer",
         {{"nominal_bw_bps", 500e6},
          {"one_way_delay_us", 4000},
          {"fraction_pct", 200.0},
          {"capacity_bytes", nullptr}}},
        {"aqm", aqm_template()},
        {"flow_count", 5},
        {"flow_defaults", flow_template()},
        {"flows", json::array()},
        {"metrics", {{"window_ms", 100.0}}}};
}

// Overlays `in` on `tmpl`, rejecting keys the template does not know.
json merge_checked(const json& in, const json& tmpl, const std::string& path) {
    if (!in.is_object()) config_error("expected object at '" + path + "'");
    json out = tmpl;
    for (const auto& [k, v] : in.items()) {
        if (!tmpl.contains(k)) config_error("unknown key '" + path + k + "'");
        const json& tv = tmpl.at(k);
        if (tv.is_object() && v.is_object()) {
            out[k] = merge_checked(v, tv, path + k + ".");
        } else {
            out[k] = v;
        }
    }
    return out;
}

AqmKind parse_discipline(const std::string& s, const std::string& path) {
    if (s == "droptail") return AqmKind::DropTail;
    if (s == "red") return AqmKind::Red;
    if (s == "ared") return AqmKind::Ared;
    if (s == "codel") return AqmKind::Codel;
    if (s == "l4s") return AqmKind::L4s;
    config_error("bad discipline '" + s + "' at " + path);
}

ActionMode parse_mode(const std::string& s, const std::string& path) {
    if (s == "drop") return ActionMode::Drop;
    if (s == "mark") return ActionMode::Mark;
    config_error("bad mode '" + s + "' at " + path);
}

CcAlgo parse_cc(const std::string& s, const std::string& path) {
    if (s == "reno") return CcAlgo::Reno;
    if (s == "cubic") return CcAlgo::Cubic;
    if (s == "bbr") return CcAlgo::BbrLite;
    if (s == "dctcp") return CcAlgo::DctcpEcn;
    config_error("bad cc '" + s + "' at " + path);
}

AppMode parse_app(const std::string& s, const std::string& path) {
    if (s == "vbr") return AppMode::Vbr;
    if (s == "has") return AppMode::Has;
    if (s == "bulk") return AppMode::Bulk;
    config_error("bad app '" + s + "' at " + path);
}

HasClient::Abr parse_abr(const std::string& s, const std::string& path) {
    if (s == "con") return HasClient::Abr::Con;
    if (s == "con_plus") return HasClient::Abr::ConPlus;
    if (s == "fixed") return HasClient::Abr::Fixed;
    config_error("bad abr '" + s + "' at " + path);
}

AqmSpec parse_aqm(const json& j, const std::string& path) {
    AqmSpec a;
    a.kind = parse_discipline(j.at("discipline").get<std::string>(), path);
    a.mode = parse_mode(j.at("mode").get<std::string>(), path);
    a.min_th_pct = j.at("min_th_pct").get<double>();
    a.max_th_pct = j.at("max_th_pct").get<double>();
    if (!j.at("min_th_bytes").is_null()) a.min_th_bytes = j.at("min_th_bytes").get<double>();
    if (!j.at("max_th_bytes").is_null()) a.max_th_bytes = j.at("max_th_bytes").get<double>();
    a.p_max = j.at("p_max").get<double>();
    a.w_q = j.at("w_q").get<double>();
    a.ared_interval_s = j.at("interval_s").get<double>();
    if (!j.at("alpha_inc").is_null()) a.alpha_inc = j.at("alpha_inc").get<double>();
    a.beta_dec = j.at("beta_dec").get<double>();
    if (!j.at("target_low_pct").is_null()) a.target_low_pct = j.at("target_low_pct").get<double>();
    if (!j.at("target_high_pct").is_null()) a.target_high_pct = j.at("target_high_pct").get<double>();
    a.codel_target_ms = j.at("target_ms").get<double>();
    a.codel_interval_ms = j.at("interval_ms").get<double>();
    a.l4s_low_ms = j.at("low_th_ms").get<double>();
    a.l4s_high_ms = j.at("high_th_ms").get<double>();
    a.l4s_alpha = j.at("alpha").get<double>();
    a.l4s_dt_ms = j.at("dt_ms").get<double>();

    if (a.kind == AqmKind::Red || a.kind == AqmKind::Ared) {
        double min_th = a.min_th_bytes ? *a.min_th_bytes : a.min_th_pct;
        double max_th = a.max_th_bytes ? *a.max_th_bytes : a.max_th_pct;
        if (!(min_th < max_th)) config_error("red thresholds must satisfy min < max at " + path);
        if (!(a.p_max > 0.0 && a.p_max <= 1.0)) config_error("p_max outside (0,1] at " + path);
        if (!(a.w_q > 0.0 && a.w_q <= 1.0)) config_error("w_q outside (0,1] at " + path);
    }
    if (a.kind == AqmKind::Codel && (a.codel_target_ms <= 0.0 || a.codel_interval_ms <= 0.0))
        config_error("codel target/interval must be positive at " + path);
    if (a.kind == AqmKind::L4s && !(a.l4s_low_ms < a.l4s_high_ms))
        config_error("l4s thresholds must satisfy low < high at " + path);
    return a;
}

FlowSpec parse_flow(const json& j, const json& scenario_aqm, const std::string& path) {
    FlowSpec f;
    f.app = parse_app(j.at("app").get<std::string>(), path);
    f.cc = parse_cc(j.at("cc").get<std::string>(), path);
    f.ecn = j.at("ecn").get<bool>();
    f.rto_only = j.at("rto_only").get<bool>();
    f.hystart = j.at("hystart").get<bool>();

    json aqm_json = scenario_aqm;
    if (!j.at("aqm").is_null()) {
        aqm_json = merge_checked(j.at("aqm"), scenario_aqm, path + "aqm.");
    }
    f.aqm = parse_aqm(aqm_json, path + "aqm");

    const json& vbr = j.at("vbr");
    f.vbr_datarate_bps = vbr.at("datarate_bps").get<double>();
    f.vbr_fps = vbr.at("fps").get<double>();
    if (f.vbr_datarate_bps <= 0.0 || f.vbr_fps <= 0.0)
        config_error("vbr datarate/fps must be positive at " + path);

    const json& has = j.at("has");
    f.has.segment_duration_s = has.at("segment_duration_s").get<double>();
    f.has.max_buffer_s = has.at("max_buffer_s").get<double>();
    f.has.startup_threshold_s = has.at("startup_threshold_s").get<double>();
    f.has.safety = has.at("safety").get<double>();
    f.has.abr = parse_abr(has.at("abr").get<std::string>(), path + "has.abr");
    f.has.fixed_level = has.at("fixed_level").get<int>();
    f.ladder_file = has.at("ladder_file").get<std::string>();
    if (f.has.segment_duration_s <= 0.0 || f.has.max_buffer_s <= 0.0)
        config_error("segment duration and max buffer must be positive at " + path);

    // DropTail has no marking; force drop mode and reject ECN with it.
    if (f.aqm.kind == AqmKind::DropTail) f.aqm.mode = ActionMode::Drop;
    if (f.ecn && f.aqm.mode != ActionMode::Mark)
        config_error("ecn=true requires aqm mode 'mark' at " + path);
    return f;
}

}  // namespace

AqmSetup AqmSpec::resolve(std::uint64_t capacity_bytes) const {
    AqmSetup s;
    s.kind = kind;
    s.mode = mode;
    double cap = static_cast<double>(capacity_bytes);
    RedConfig red;
    red.min_th = min_th_bytes ? *min_th_bytes : min_th_pct / 100.0 * cap;
    red.max_th = max_th_bytes ? *max_th_bytes : max_th_pct / 100.0 * cap;
    red.p_max = p_max;
    red.w_q = w_q;
    s.red = red;
    s.ared.red = red;
    s.ared.interval = from_s(ared_interval_s);
    s.ared.alpha_inc = alpha_inc;
    s.ared.beta_dec = beta_dec;
    double span = red.max_th - red.min_th;
    s.ared.target_low = target_low_pct ? *target_low_pct / 100.0 * cap : red.min_th + 0.4 * span;
    s.ared.target_high = target_high_pct ? *target_high_pct / 100.0 * cap : red.min_th + 0.6 * span;
    s.codel.target = from_ms(codel_target_ms);
    s.codel.interval = from_ms(codel_interval_ms);
    s.l4s.low_th = from_ms(l4s_low_ms);
    s.l4s.high_th = from_ms(l4s_high_ms);
    s.l4s.alpha = l4s_alpha;
    s.l4s.dt = from_ms(l4s_dt_ms);
    return s;
}

std::uint64_t BufferSpec::resolve_bytes() const {
    if (capacity_bytes) return *capacity_bytes;
    return bdp_buffer_bytes(nominal_bw_bps, to_s(one_way_delay), fraction_pct);
}

std::string Scenario::config_hash() const {
    std::uint64_t h = fnv1a64(resolved.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Scenario Scenario::from_json(const json& input) {
    if (!input.is_object()) config_error("scenario must be a JSON object");
    json merged = merge_checked(input, scenario_template(), "");

    Scenario sc;
    sc.name = merged.at("name").get<std::string>();
    if (sc.name.empty()) config_error("'name' is required");
    sc.horizon_s = merged.at("horizon_s").get<double>();
    if (sc.horizon_s <= 0.0) config_error("horizon_s must be positive");
    sc.seed = merged.at("seed").get<std::uint64_t>();
    sc.mss = merged.at("mss_bytes").get<std::uint32_t>();
    if (sc.mss < 67) config_error("mss_bytes too small");
    sc.metrics_window = from_ms(merged.at("metrics").at("window_ms").get<double>());
    if (sc.metrics_window <= 0) config_error("metrics window must be positive");

    const json& ch = merged.at("channel");
    if (!ch.at("trace_file").is_null()) {
        if (input.contains("channel") && input.at("channel").contains("synth"))
            config_error("channel: give either trace_file or synth, not both");
        sc.channel.synthetic = false;
        sc.channel.trace_file = ch.at("trace_file").get<std::string>();
    } else {
        const json& sy = ch.at("synth");
        sc.channel.synthetic = true;
        LosNlosParams p;
        p.los_capacity_bps = sy.at("los_capacity_bps").get<double>();
        p.nlos_capacity_bps = sy.at("nlos_capacity_bps").get<double>();
        p.los_duration_s = sy.at("los_duration_s").get<double>();
        p.nlos_duration_s = sy.at("nlos_duration_s").get<double>();
        p.los_loss_prob = sy.at("los_loss_prob").get<double>();
        p.nlos_loss_prob = sy.at("nlos_loss_prob").get<double>();
        p.base_owd = from_us(sy.at("base_owd_us").get<std::int64_t>());
        p.max_harq_retx = sy.at("max_harq_retx").get<int>();
        p.harq_retx_delay = from_us(sy.at("harq_retx_delay_us").get<std::int64_t>());
        p.total_duration_s = sc.horizon_s;
        if (p.los_duration_s <= 0.0 || p.nlos_duration_s <= 0.0)
            config_error("channel.synth durations must be positive");
        sc.channel.synth = p;
    }

    const json& buf = merged.at("buffer");
    sc.buffer.nominal_bw_bps = buf.at("nominal_bw_bps").get<double>();
    sc.buffer.one_way_delay = from_us(buf.at("one_way_delay_us").get<std::int64_t>());
    sc.buffer.fraction_pct = buf.at("fraction_pct").get<double>();
    if (!buf.at("capacity_bytes").is_null())
        sc.buffer.capacity_bytes = buf.at("capacity_bytes").get<std::uint64_t>();
    if (sc.buffer.resolve_bytes() == 0) config_error("buffer resolves to zero bytes");

    const json& scenario_aqm = merged.at("aqm");
    const json& flow_defaults = merged.at("flow_defaults");

    json flows = json::array();
    if (input.contains("flows") && !input.at("flows").empty()) {
        std::size_t i = 0;
        for (const auto& item : input.at("flows")) {
            flows.push_back(merge_checked(item, flow_defaults, "flows[" + std::to_string(i) + "]."));
            ++i;
        }
        if (input.contains("flow_count") &&
            merged.at("flow_count").get<std::size_t>() != flows.size())
            config_error("flow_count disagrees with the flows array");
    } else {
        std::size_t n = merged.at("flow_count").get<std::size_t>();
        if (n == 0) config_error("flow_count must be at least 1");
        for (std::size_t i = 0; i < n; ++i) flows.push_back(flow_defaults);
    }

    std::size_t idx = 0;
    for (const auto& fj : flows) {
        sc.flows.push_back(parse_flow(fj, scenario_aqm, "flows[" + std::to_string(idx) + "]."));
        ++idx;
    }

    merged["flows"] = flows;
    merged["flow_count"] = flows.size();
    merged.erase("flow_defaults");
    sc.resolved = std::move(merged);
    return sc;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        config_error(path + ": " + e.what());
    }
    return from_json(j);
}

// ------------------------------------------------------------------- sweeps

void json_set_path(json& doc, const std::string& path, const json& value) {
    if (path.empty()) {
        doc.merge_patch(value);
        return;
    }
    json* cur = &doc;
    std::istringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!cur->contains(parts[i]) || !(*cur)[parts[i]].is_object()) {
            (*cur)[parts[i]] = json::object();
        }
        cur = &(*cur)[parts[i]];
    }
    (*cur)[parts.back()] = value;
}

Sweep Sweep::from_json(const json& j) {
    if (!j.is_object()) config_error("sweep must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (k != "name" && k != "base" && k != "base_preset" && k != "base_file" &&
            k != "axis" && k != "values")
            config_error("sweep: unknown key '" + k + "'");
    }
    Sweep sw;
    sw.name = j.value("name", std::string("sweep"));
    int bases = j.contains("base") + j.contains("base_preset") + j.contains("base_file");
    if (bases != 1) config_error("sweep: give exactly one of base, base_preset, base_file");
    if (j.contains("base")) {
        sw.base_raw = j.at("base");
    } else if (j.contains("base_preset")) {
        sw.base_raw = preset_json(j.at("base_preset").get<std::string>());
    } else {
        std::ifstream in(j.at("base_file").get<std::string>());
        if (!in) config_error("sweep: cannot open base_file");
        in >> sw.base_raw;
    }
    sw.base = Scenario::from_json(sw.base_raw);
    if (!j.contains("axis") || !j.contains("values")) config_error("sweep: axis and values required");
    sw.axis = j.at("axis").get<std::string>();
    if (!j.at("values").is_array() || j.at("values").empty())
        config_error("sweep: values must be a non-empty array");
    for (const auto& v : j.at("values")) sw.values.push_back(v);
    // Every value must materialize cleanly; fail fast at load time.
    for (std::size_t i = 0; i < sw.values.size(); ++i) (void)sw.materialize(i);
    return sw;
}

Sweep Sweep::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        config_error(path + ": " + e.what());
    }
    return from_json(j);
}

Scenario Sweep::materialize(std::size_t index) const {
    if (index >= values.size()) config_error("sweep: value index out of range");
    json raw = base_raw;
    json_set_path(raw, axis, values[index]);
    raw["seed"] = derive_seed(base.seed, index);
    return Scenario::from_json(raw);
}

// ------------------------------------------------------------------ presets

namespace {

json synth_channel(double los_bps, double nlos_bps, double los_s, double nlos_s) {
    return json{{"synth",
                 {{"los_capacity_bps", los_bps},
                  {"nlos_capacity_bps", nlos_bps},
                  {"los_duration_s", los_s},
                  {"nlos_duration_s", nlos_s}}}};
}

json preset_table2_vbr() {
    return json{{"name", "table2-vbr"},
                {"horizon_s", 100.0},
                {"seed", 1},
                {"channel", synth_channel(500e6, 100e6, 20, 20)},
                {"aqm", {{"discipline", "droptail"}}},
                {"flow_count", 5},
                {"flow_defaults", {{"app", "vbr"}, {"cc", "cubic"}}}};
}

json preset_table5(char variant) {
    bool ecn = variant == 'C' || variant == 'D';
    std::string cc = (variant == 'A' || variant == 'C') ? "bbr" : "cubic";
    json aqm = ecn ? json{{"discipline", "l4s"}, {"mode", "mark"},
                         {"low_th_ms", 10.0}, {"high_th_ms", 25.0}}
                   : json{{"discipline", "droptail"}};
    return json{{"name", std::string("table5-") + variant},
                {"horizon_s", 100.0},
                {"seed", 1},
                {"channel", synth_channel(500e6, 100e6, 20, 20)},
                {"aqm", aqm},
                {"flow_count", 5},
                {"flow_defaults",
                 {{"app", "has"},
                  {"cc", cc},
                  {"ecn", ecn},
                  {"has", {{"segment_duration_s", 2.0}, {"max_buffer_s", 6.0}}}}}};
}

json fig5_base() {
    return json{{"name", ""},
                {"horizon_s", 30.0},
                {"seed", 7},
                {"channel", synth_channel(500e6, 10e6, 5, 25)},
                {"flow_count", 1},
                {"flow_defaults",
                 {{"app", "vbr"}, {"cc", "reno"}, {"rto_only", true},
                  {"vbr", {{"datarate_bps", 25e6}, {"fps", 60.0}}}}}};
}

json preset_fig5_droptail() {
    json j = fig5_base();
    j["name"] = "fig5-droptail";
    j["aqm"] = {{"discipline", "droptail"}};
    return j;
}

json preset_fig5_aqm() {
    json j = fig5_base();
    j["name"] = "fig5-aqm";
    j["aqm"] = {{"discipline", "red"}, {"mode", "drop"}, {"min_th_pct", 80.0},
                {"max_th_pct", 100.0}, {"p_max", 0.2}, {"w_q", 0.01}};
    return j;
}

json preset_fig5_ecn() {
    json j = fig5_base();
    j["name"] = "fig5-ecn";
    j["aqm"] = {{"discipline", "l4s"}, {"mode", "mark"},
                {"low_th_ms", 10.0}, {"high_th_ms", 25.0}};
    j["flow_defaults"]["cc"] = "dctcp";
    j["flow_defaults"]["ecn"] = true;
    return j;
}

json preset_fig6_base() {
    return json{{"name", "fig6-base"},
                {"horizon_s", 120.0},
                {"seed", 11},
                {"channel", synth_channel(500e6, 18e6, 5, 115)},
                {"aqm", {{"discipline", "droptail"}}},
                {"flow_count", 1},
                {"flow_defaults",
                 {{"app", "vbr"}, {"cc", "dctcp"}, {"vbr", {{"datarate_bps", 25e6}}}}}};
}

json fig6_patch(const std::string& name, const json& aqm, bool ecn) {
    json flow_patch = {{"ecn", ecn}};
    return json{{"name", name}, {"aqm", aqm}, {"flow_defaults", flow_patch}};
}

json preset_fig6_grid() {
    json red = {{"discipline", "red"}, {"min_th_pct", 80.0}, {"max_th_pct", 100.0}, {"w_q", 0.05}};
    json ared = {{"discipline", "ared"}, {"min_th_pct", 90.0}, {"max_th_pct", 100.0}, {"w_q", 0.05}};
    json codel = {{"discipline", "codel"}, {"target_ms", 10.0}, {"interval_ms", 16.0}};
    json l4s = {{"discipline", "l4s"}, {"low_th_ms", 10.0}, {"high_th_ms", 25.0}};
    auto with_mode = [](json a, const char* mode) {
        a["mode"] = mode;
        return a;
    };
    json values = json::array();
    values.push_back(fig6_patch("fig6-droptail", {{"discipline", "droptail"}, {"mode", "drop"}}, false));
    values.push_back(fig6_patch("fig6-red-drop", with_mode(red, "drop"), false));
    values.push_back(fig6_patch("fig6-red-mark", with_mode(red, "mark"), true));
    values.push_back(fig6_patch("fig6-ared-drop", with_mode(ared, "drop"), false));
    values.push_back(fig6_patch("fig6-ared-mark", with_mode(ared, "mark"), true));
    values.push_back(fig6_patch("fig6-codel-drop", with_mode(codel, "drop"), false));
    values.push_back(fig6_patch("fig6-codel-mark", with_mode(codel, "mark"), true));
    values.push_back(fig6_patch("fig6-l4s-drop", with_mode(l4s, "drop"), false));
    values.push_back(fig6_patch("fig6-l4s-mark", with_mode(l4s, "mark"), true));
    return json{{"name", "fig6-grid"},
                {"base_preset", "fig6-base"},
                {"axis", ""},
                {"values", values}};
}

json preset_codel_target_sweep() {
    json base = preset_table2_vbr();
    base["name"] = "table2-vbr-codel";
    base["aqm"] = {{"discipline", "codel"}, {"mode", "drop"}, {"target_ms", 10.0}};
    return json{{"name", "codel-target-sweep"},
                {"base", base},
                {"axis", "aqm.target_ms"},
                {"values", {1.0, 5.0, 10.0, 50.0, 100.0}}};
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"table2-vbr", "table5-A",  "table5-B",      "table5-C",
            "table5-D",   "fig5-droptail", "fig5-aqm",  "fig5-ecn",
            "fig6-base",  "fig6-grid",     "codel-target-sweep"};
}

bool is_sweep_preset(const std::string& name) {
    return name == "fig6-grid" || name == "codel-target-sweep";
}

json preset_json(const std::string& name) {
    if (name == "table2-vbr") return preset_table2_vbr();
    if (name == "table5-A") return preset_table5('A');
    if (name == "table5-B") return preset_table5('B');
    if (name == "table5-C") return preset_table5('C');
    if (name == "table5-D") return preset_table5('D');
    if (name == "fig5-droptail") return preset_fig5_droptail();
    if (name == "fig5-aqm") return preset_fig5_aqm();
    if (name == "fig5-ecn") return preset_fig5_ecn();
    if (name == "fig6-base") return preset_fig6_base();
    if (name == "fig6-grid") return preset_fig6_grid();
    if (name == "codel-target-sweep") return preset_codel_target_sweep();
    config_error("unknown preset '" + name + "'");
}

Scenario preset_scenario(const std::string& name) {
    if (is_sweep_preset(name)) config_error("'" + name + "' is a sweep preset");
    return Scenario::from_json(preset_json(name));
}

Sweep preset_sweep(const std::string& name) {
    if (!is_sweep_preset(name)) config_error("'" + name + "' is not a sweep preset");
    return Sweep::from_json(preset_json(name));
}

}  // namespace crossim
