// secrate: numeric bounds on delay-limited secrecy rates over block-fading
// wiretap channels, plus a simulator for the matching two-stage one-time-pad
// key-renewal scheme. Subcommands:
//   bounds      upper/lower bound per SNR grid point -> CSV
//   simulate    run the protocol -> JSON report (optional per-block trace CSV)
//   highsnr     high-SNR limit of the full-CSI bounds
//   fixedpoint  main-CSI achievable fixed point per grid point -> CSV
// Exit codes: 0 ok, 2 bad config, 3 numerical divergence, 1 anything else.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrate/errors.hpp"
#include "secrate/experiment.hpp"
#include "secrate/serialization.hpp"

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw secrate::ConfigError("cannot write to '" + path + "'");
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "delay-limited secrecy bounds and one-time-pad key-renewal simulation "
      "for block-fading wiretap channels"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string trace_path;

  CLI::App* cmd_bounds =
      app.add_subcommand("bounds", "evaluate bounds over the SNR grid");
  cmd_bounds->add_option("--config", config_path, "config JSON")->required();
  cmd_bounds->add_option("--out", out_path, "output CSV")->required();

  CLI::App* cmd_sim =
      app.add_subcommand("simulate", "run the key-renewal protocol");
  cmd_sim->add_option("--config", config_path, "config JSON")->required();
  cmd_sim->add_option("--out", out_path, "report JSON")->required();
  cmd_sim->add_option("--trace", trace_path, "per-block trace CSV");

  CLI::App* cmd_highsnr =
      app.add_subcommand("highsnr", "high-SNR limit of the full-CSI bounds");
  cmd_highsnr->add_option("--config", config_path, "config JSON")->required();
  cmd_highsnr->add_option("--out", out_path, "output CSV");

  CLI::App* cmd_fixed = app.add_subcommand(
      "fixedpoint", "main-CSI achievable fixed point over the SNR grid");
  cmd_fixed->add_option("--config", config_path, "config JSON")->required();
  cmd_fixed->add_option("--out", out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    secrate::ExperimentConfig cfg = secrate::load_config_file(config_path);

    if (cmd_bounds->parsed()) {
      std::vector<secrate::BoundResult> rows = secrate::run_sweep(cfg);
      auto os = open_out(out_path);
      secrate::write_bounds_csv(os, rows);
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    } else if (cmd_sim->parsed()) {
      std::vector<secrate::TraceRow> trace;
      secrate::SimReport rep =
          secrate::run_sim(cfg, trace_path.empty() ? nullptr : &trace);
      auto os = open_out(out_path);
      os << secrate::to_json(rep).dump(2) << "\n";
      if (!trace_path.empty()) {
        auto ts = open_out(trace_path);
        secrate::write_trace_csv(ts, trace);
      }
      std::cout << "throughput " << secrate::format_double(rep.achieved_throughput)
                << " bits/use, enc errors " << rep.enc_error_count << "/"
                << rep.payload_blocks << ", decrypt failures "
                << rep.decrypt_failures << ", outage rate "
                << secrate::format_double(rep.outage.outage_rate) << "\n";
    } else if (cmd_highsnr->parsed()) {
      secrate::BoundResult r = secrate::run_high_snr(cfg);
      std::cout << "high-SNR limit " << secrate::format_double(r.value)
                << " bits/use (stderr " << secrate::format_double(r.std_error)
                << ")\n";
      if (r.hypothesis_violated)
        std::cout << "warning: E[1/min(h_m,h_e)] is infinite; the bounds need "
                     "not approach this value\n";
      if (!out_path.empty()) {
        auto os = open_out(out_path);
        std::vector<secrate::BoundResult> rows{r};
        secrate::write_bounds_csv(os, rows);
      }
    } else if (cmd_fixed->parsed()) {
      std::vector<secrate::BoundResult> rows = secrate::run_fixed_point(cfg);
      auto os = open_out(out_path);
      secrate::write_bounds_csv(os, rows);
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    }
    return 0;
  } catch (const secrate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const secrate::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
