#pragma once

#include <string>
#include <vector>

#include "network.h"
#include "pbt.h"

namespace pbtzero {

// Shortest round-trip decimal representation; used for every number written
// to metrics or tables so re-runs produce byte-identical files.
std::string format_double(double v);

struct IterationReport {
    int64_t iteration = 0;
    struct AgentRow {
        int agent_id = 0;
        double learning_rate = 0.0;     // values used during this iteration's optimization
        double value_loss_ratio = 0.0;
        double eval_win_rate = -1.0;    // negative = no evaluation phase (baseline mode)
        LossBreakdown loss;             // mean over the iteration's train steps
    };
    std::vector<AgentRow> agents;
    std::vector<int> replaced_ids;
    double wall_time_s = 0.0;  // console reporting only, never persisted
};

// metrics.csv schema: one row per (iteration, agent) plus one mean row with
// agent = "mean". replaced_by / perturb factors are empty unless the agent
// had the corresponding lineage event that iteration, which makes the full
// exploit/explore history reconstructible from the stream.
extern const char* const kMetricsHeader;

void init_metrics(const std::string& run_dir);
void append_metrics(const std::string& run_dir, const IterationReport& report,
                    const PopulationState& post_state);

enum class ExportFormat { Csv, JsonLines };

// Re-emits a run's metrics stream in the requested format.
void export_metrics(const std::string& run_dir, ExportFormat format, const std::string& out_path);

}  // namespace pbtzero
