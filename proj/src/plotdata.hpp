#pragma once

#include <string>

namespace crossim {

// Turns a directory of run outputs into long-format CSVs ready for plotting:
// timeline.csv (per-event), scatter.csv (goodput vs sRTT per run), and
// qoe.csv (per-session quality/stall rows). Throws when the directory holds
// no runs.
void emit_plotdata(const std::string& results_root, const std::string& out_dir);

}  // namespace crossim
