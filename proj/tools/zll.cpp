// Experiment front end. Parses flags (or a key=value config file), runs the
// requested experiment against a cached-or-rebuilt ladder, writes the report,
// and exits 0 on success, 2 on a band failure, 1 on any error.
//
//   zll --experiment correlation6 --t 1e5 --out corr6.json
//   zll --experiment geometry --t 1e6 --format csv
//   zll --plot-from a.json b.json c.json --out trend.csv

#include <iostream>
#include <string>
#include <vector>

#include "zll/cli_io.hpp"

namespace {

int run_plot_mode(const std::vector<std::string>& files, const std::string& out_path) {
  std::vector<zll::PlotRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      std::cerr << "error: cannot open report: " << f << "\n";
      return 1;
    }
    nlohmann::json j;
    in >> j;
    rows.push_back(zll::plot_row_from_json(j));
  }
  zll::write_text_file(out_path, zll::emit_plot_data(std::move(rows)));
  std::cerr << "plot data written: " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // Plot-emission mode: --plot-from <report.json>... [--out <file>]
  if (!args.empty() && args[0] == "--plot-from") {
    std::vector<std::string> files;
    std::string out_path = "plot.csv";
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--out" && i + 1 < args.size()) {
        out_path = args[++i];
      } else if (args[i].rfind("--", 0) == 0) {
        std::cerr << "usage error: unknown flag in plot mode: " << args[i] << "\n";
        return 1;
      } else {
        files.push_back(args[i]);
      }
    }
    try {
      return run_plot_mode(files, out_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  zll::ExperimentConfig cfg;
  try {
    cfg = zll::parse_config(args);
  } catch (const zll::UsageError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    return zll::run_experiment(cfg, &std::cerr);
  } catch (const std::exception& e) {
    // Serialize the failure into the report so batch runs keep a record.
    try {
      nlohmann::json j{{"experiment", zll::to_string(cfg.experiment)}, {"error", e.what()}};
      zll::write_text_file(cfg.out_path, j.dump(2) + "\n");
    } catch (...) {
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
