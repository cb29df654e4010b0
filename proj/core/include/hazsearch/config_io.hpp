#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hazsearch/search.hpp"
#include "hazsearch/simulator.hpp"
#include "hazsearch/workcell.hpp"

namespace hazsearch {

using ordered_json = nlohmann::ordered_json;

// Cell description <-> JSON.  Loading applies defaults for omitted sections,
// rejects unknown keys, and reports errors with their JSON path.
WorkcellConfig workcell_config_from_json(const ordered_json& j);
ordered_json workcell_config_to_json(const WorkcellConfig& cfg);
WorkcellConfig load_workcell_config(const std::filesystem::path& path);

// Search settings <-> JSON (same conventions).  The unsafe threshold `r_th`
// lives at the top level next to the budgets it belongs with.
SearchConfig search_config_from_json(const ordered_json& j);
ordered_json search_config_to_json(const SearchConfig& cfg);
SearchConfig load_search_config(const std::filesystem::path& path);

// FNV-1a 64-bit over a byte string, as 16 hex digits.  Used to stamp reports
// with the exact configs that produced them.
std::string fingerprint_hex(const std::string& bytes);

// Full search report as JSON: manifest (no wall-clock data, so reruns match
// byte for byte), both configs, totals, hazards, and the per-sequence table.
ordered_json report_to_json(const SearchReport& report, const WorkcellConfig& cell);

// The exact file bytes `write_report` produces.
std::string render_report(const SearchReport& report, const WorkcellConfig& cell);
void write_report(const std::filesystem::path& path, const SearchReport& report,
                  const WorkcellConfig& cell);

// Per-step trace of one simulation as CSV (time,robot_id,v_r,d_hr,f_c,r),
// one row per robot per step.
std::string trace_to_csv(const SimulationOutcome& outcome, const RiskConfig& risk);

} // namespace hazsearch
