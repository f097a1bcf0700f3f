#include "metrics.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace pbtzero {

const char* const kMetricsHeader =
    "iteration,agent,learning_rate,value_loss_ratio,eval_win_rate,"
    "loss_value,loss_policy,loss_reg,loss_total,replaced_by,perturb_lr_factor,perturb_x_factor";

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::string metrics_path(const std::string& run_dir) {
    return (fs::path(run_dir) / "metrics.csv").string();
}
std::string lineage_path(const std::string& run_dir) {
    return (fs::path(run_dir) / "lineage.log").string();
}

struct IterationEvents {
    std::string replaced_by;  // source agent id, or empty
    std::string lr_factor;
    std::string x_factor;
};

IterationEvents events_for(const PopulationState& state, int agent_id, int64_t iteration) {
    IterationEvents out;
    const AgentSlot& slot = state.slot_by_id(agent_id);
    for (const auto& ev : slot.lineage) {
        if (ev.iteration != iteration) continue;
        if (ev.kind == LineageEvent::Kind::ReplacedBy) {
            out.replaced_by = std::to_string(ev.source_agent);
        } else {
            out.lr_factor = format_double(ev.lr_factor);
            out.x_factor = format_double(ev.x_factor);
        }
    }
    return out;
}

}  // namespace

void init_metrics(const std::string& run_dir) {
    fs::create_directories(run_dir);
    if (!fs::exists(metrics_path(run_dir))) {
        std::ofstream out(metrics_path(run_dir));
        out << kMetricsHeader << "\n";
    }
    if (!fs::exists(lineage_path(run_dir))) {
        std::ofstream out(lineage_path(run_dir));  // created empty
    }
}

void append_metrics(const std::string& run_dir, const IterationReport& report,
                    const PopulationState& post_state) {
    std::ofstream out(metrics_path(run_dir), std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + metrics_path(run_dir));

    double mean_lr = 0, mean_x = 0, mean_rate = 0, mean_v = 0, mean_p = 0, mean_r = 0,
           mean_t = 0;
    bool has_eval = false;
    for (const auto& row : report.agents) {
        const IterationEvents ev = events_for(post_state, row.agent_id, report.iteration);
        out << report.iteration << ',' << row.agent_id << ',' << format_double(row.learning_rate)
            << ',' << format_double(row.value_loss_ratio) << ','
            << (row.eval_win_rate >= 0 ? format_double(row.eval_win_rate) : "") << ','
            << format_double(row.loss.value_term) << ',' << format_double(row.loss.policy_term)
            << ',' << format_double(row.loss.reg_term) << ',' << format_double(row.loss.total)
            << ',' << ev.replaced_by << ',' << ev.lr_factor << ',' << ev.x_factor << "\n";
        mean_lr += row.learning_rate;
        mean_x += row.value_loss_ratio;
        if (row.eval_win_rate >= 0) {
            has_eval = true;
            mean_rate += row.eval_win_rate;
        }
        mean_v += row.loss.value_term;
        mean_p += row.loss.policy_term;
        mean_r += row.loss.reg_term;
        mean_t += row.loss.total;
    }
    const double n = static_cast<double>(report.agents.size());
    out << report.iteration << ",mean," << format_double(mean_lr / n) << ','
        << format_double(mean_x / n) << ',' << (has_eval ? format_double(mean_rate / n) : "")
        << ',' << format_double(mean_v / n) << ',' << format_double(mean_p / n) << ','
        << format_double(mean_r / n) << ',' << format_double(mean_t / n) << ",,,\n";

    std::ofstream lineage(lineage_path(run_dir), std::ios::app);
    for (const auto& row : report.agents) {
        const AgentSlot& slot = post_state.slot_by_id(row.agent_id);
        for (const auto& ev : slot.lineage) {
            if (ev.iteration != report.iteration) continue;
            if (ev.kind == LineageEvent::Kind::ReplacedBy) {
                lineage << "iter=" << ev.iteration << " agent=" << row.agent_id
                        << " event=replaced_by source=" << ev.source_agent << "\n";
            } else {
                lineage << "iter=" << ev.iteration << " agent=" << row.agent_id
                        << " event=perturbed lr_factor=" << format_double(ev.lr_factor)
                        << " x_factor=" << format_double(ev.x_factor) << "\n";
            }
        }
    }
}

void export_metrics(const std::string& run_dir, ExportFormat format,
                    const std::string& out_path) {
    std::ifstream in(metrics_path(run_dir));
    if (!in) throw std::runtime_error("no metrics stream under " + run_dir);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);

    std::string line;
    if (format == ExportFormat::Csv) {
        while (std::getline(in, line)) out << line << "\n";
        return;
    }

    // JSON lines mirror the CSV columns; numeric fields become numbers,
    // empty fields are omitted.
    std::getline(in, line);
    std::vector<std::string> columns;
    {
        std::istringstream header(line);
        std::string col;
        while (std::getline(header, col, ',')) columns.push_back(col);
    }
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        nlohmann::ordered_json obj;
        for (size_t i = 0; i < columns.size() && std::getline(row, cell, ','); ++i) {
            if (cell.empty()) continue;
            if (columns[i] == "agent" && cell == "mean") {
                obj[columns[i]] = cell;
                continue;
            }
            try {
                size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used == cell.size()) {
                    obj[columns[i]] = v;
                    continue;
                }
            } catch (const std::exception&) {
            }
            obj[columns[i]] = cell;
        }
        out << obj.dump() << "\n";
    }
}

}  // namespace pbtzero
