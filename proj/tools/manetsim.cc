// Command line front end: run one scenario, sweep the protocol grid, turn
// sweep tables into plot files, or just check a config.

#include "manet/config.h"
#include "manet/scenario.h"
#include "manet/sweep.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace manet;

namespace {

enum ExitCode
{
  kOk = 0,
  kConfigError = 1,
  kRunFailed = 2,
};

struct Overrides
{
  std::string configPath;
  std::string protocol;
  std::string nodes;
  std::string pause;
  std::string seed;
  std::string simTime;
  std::string warmup;
  std::string mac;
};

void
AddScenarioOptions (CLI::App *cmd, Overrides &o)
{
  cmd->add_option ("-c,--config", o.configPath, "key = value config file");
  cmd->add_option ("--protocol", o.protocol, "DSDV, AODV or DSR");
  cmd->add_option ("--nodes", o.nodes, "node count");
  cmd->add_option ("--pause", o.pause, "pause time in seconds, or 'static'");
  cmd->add_option ("--seed", o.seed, "master seed");
  cmd->add_option ("--sim-time", o.simTime, "simulated seconds");
  cmd->add_option ("--warmup", o.warmup, "seconds excluded from metrics");
  cmd->add_option ("--mac", o.mac, "ideal or realistic");
}

ConfigFile
Resolve (const Overrides &o)
{
  ConfigFile file;
  if (!o.configPath.empty ())
    {
      file = LoadConfig (o.configPath);
    }
  std::vector<FieldError> errors;
  auto apply = [&] (const char *key, const std::string &value) {
    if (value.empty ())
      {
        return;
      }
    try
      {
        SetScenarioField (file.scenario, key, value);
      }
    catch (const ConfigInvalid &e)
      {
        errors.insert (errors.end (), e.Errors ().begin (), e.Errors ().end ());
      }
  };
  apply ("protocol", o.protocol);
  apply ("nodes", o.nodes);
  apply ("pause", o.pause);
  apply ("seed", o.seed);
  apply ("sim_time", o.simTime);
  apply ("warmup", o.warmup);
  apply ("mac", o.mac);
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
  return file;
}

void
PrintErrors (const ConfigInvalid &e)
{
  for (const auto &fe : e.Errors ())
    {
      std::cerr << "config error: " << fe.field << ": " << fe.message << "\n";
    }
}

void
PrintMetrics (const MetricsRecord &m)
{
  std::cout << "packets_sent " << m.packetsSent << "\n"
            << "packets_received " << m.packetsReceived << "\n"
            << "pdr_percent " << FormatValue (m.pdr) << "\n"
            << "throughput_bps " << FormatValue (m.throughput) << "\n"
            << "avg_delay_s " << (m.avgDelay ? FormatValue (*m.avgDelay) : "n/a") << "\n"
            << "control_bytes " << m.controlBytes << "\n";
}

int
RunCommand (const Overrides &o, const std::string &outDir, bool trace)
{
  ConfigFile file = Resolve (o);
  ValidateConfig (file.scenario);
  const ScenarioConfig &c = file.scenario;

  // A single run is a one-cell sweep, so it writes the same raw.csv layout.
  SweepSpec spec;
  spec.protocols = {c.protocol};
  spec.nodeCounts = {c.nodeCount};
  spec.pauseTimes = {c.pause};
  spec.seedsPerCell = 1;
  SweepOptions options;
  options.jobs = 1;
  if (!outDir.empty ())
    {
      std::filesystem::create_directories (outDir);
      if (trace)
        {
          options.traceDir = outDir;
        }
    }
  SweepResult result = RunSweep (spec, c, options);
  const CellResult &cell = result.cells.front ();
  if (!outDir.empty ())
    {
      std::ofstream raw (std::filesystem::path (outDir) / "raw.csv");
      WriteRawCsv (raw, result);
    }
  if (!cell.metrics)
    {
      std::cerr << "run failed: " << cell.error << "\n";
      return kRunFailed;
    }
  PrintMetrics (*cell.metrics);
  return kOk;
}

int
SweepCommand (const Overrides &o, const std::string &outDir, const std::string &protocols,
              const std::string &nodeCounts, const std::string &pauses, const std::string &seeds,
              unsigned jobs, bool traces)
{
  ConfigFile file = Resolve (o);
  std::vector<FieldError> errors;
  auto apply = [&] (const char *key, const std::string &value) {
    if (value.empty ())
      {
        return;
      }
    try
      {
        SetSweepField (file.sweep, key, value);
      }
    catch (const ConfigInvalid &e)
      {
        errors.insert (errors.end (), e.Errors ().begin (), e.Errors ().end ());
      }
  };
  apply ("protocols", protocols);
  apply ("node_counts", nodeCounts);
  apply ("pause_times", pauses);
  apply ("seeds_per_cell", seeds);
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
  ValidateSweep (file.sweep);
  // Per-cell problems such as too many flows for a node count surface as
  // failed cells rather than aborting the grid.

  std::filesystem::create_directories (outDir);
  SweepOptions options;
  options.jobs = jobs;
  if (traces)
    {
      options.traceDir = outDir;
    }
  size_t total = file.sweep.CellCount ();
  size_t done = 0;
  options.progress = [&] (const CellResult &cell) {
    ++done;
    std::cerr << "[" << done << "/" << total << "] " << CellName (cell)
              << (cell.metrics ? "" : " FAILED: " + cell.error) << "\n";
  };
  SweepResult result = RunSweep (file.sweep, file.scenario, options);
  WriteSweepOutputs (result, outDir);

  size_t failures = result.Failures ();
  std::cout << result.cells.size () << " cells, " << failures << " failed; outputs in " << outDir
            << "\n";
  for (const auto &cell : result.cells)
    {
      if (!cell.metrics)
        {
          std::cout << "failed " << CellName (cell) << ": " << cell.error << "\n";
        }
    }
  return failures ? kRunFailed : kOk;
}

int
PlotDataCommand (const std::string &outDir)
{
  for (Metric m : kAllMetrics)
    {
      auto path = std::filesystem::path (outDir) / (std::string (ToString (m)) + ".csv");
      std::ifstream in (path);
      if (!in)
        {
          std::cerr << "cannot read " << path << "\n";
          return kConfigError;
        }
      for (const auto &written : EmitPlotData (ReadTable (in), m, outDir))
        {
          std::cout << written.string () << "\n";
        }
    }
  return kOk;
}

int
ValidateCommand (const Overrides &o)
{
  ConfigFile file = Resolve (o);
  auto errors = CheckConfig (file.scenario);
  auto sweepErrors = CheckSweep (file.sweep);
  errors.insert (errors.end (), sweepErrors.begin (), sweepErrors.end ());
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
  std::cout << FormatScenario (file.scenario);
  return kOk;
}

} // namespace

int
main (int argc, char **argv)
{
  CLI::App app{"Discrete-event MANET routing simulator (DSDV, AODV, DSR)"};
  app.require_subcommand (1);

  Overrides runOpts;
  std::string runOut;
  bool runTrace = false;
  auto *run = app.add_subcommand ("run", "run one scenario and print its metrics");
  AddScenarioOptions (run, runOpts);
  run->add_option ("--out", runOut, "directory for raw.csv and the trace");
  run->add_flag ("--trace", runTrace, "write trace_<cell>.csv under --out");

  Overrides sweepOpts;
  std::string sweepOut = "results";
  std::string protocols, nodeCounts, pauses, seeds;
  unsigned jobs = 0;
  bool traces = false;
  auto *sweep = app.add_subcommand ("sweep", "run the protocol x nodes x pause grid");
  AddScenarioOptions (sweep, sweepOpts);
  sweep->add_option ("--out", sweepOut, "output directory")->capture_default_str ();
  sweep->add_option ("--protocols", protocols, "comma-separated protocol list");
  sweep->add_option ("--node-counts", nodeCounts, "comma-separated node counts");
  sweep->add_option ("--pauses", pauses, "comma-separated pause times");
  sweep->add_option ("--seeds", seeds, "replicates per cell");
  sweep->add_option ("-j,--jobs", jobs, "worker threads (0 = all cores)");
  sweep->add_flag ("--traces", traces, "write a trace file per cell");

  std::string plotOut = "results";
  auto *plot = app.add_subcommand ("plotdata", "write fig_<metric>_<nodes>.dat from sweep tables");
  plot->add_option ("--out", plotOut, "directory holding the sweep CSVs")->capture_default_str ();

  Overrides validateOpts;
  auto *validate = app.add_subcommand ("validate", "check a config and print it resolved");
  AddScenarioOptions (validate, validateOpts);

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      int code = app.exit (e);
      return code == 0 ? kOk : kConfigError;
    }

  try
    {
      if (*run)
        {
          return RunCommand (runOpts, runOut, runTrace);
        }
      if (*sweep)
        {
          return SweepCommand (sweepOpts, sweepOut, protocols, nodeCounts, pauses, seeds, jobs,
                               traces);
        }
      if (*plot)
        {
          return PlotDataCommand (plotOut);
        }
      if (*validate)
        {
          return ValidateCommand (validateOpts);
        }
    }
  catch (const ConfigInvalid &e)
    {
      PrintErrors (e);
      return kConfigError;
    }
  catch (const std::exception &e)
    {
      std::cerr << "error: " << e.what () << "\n";
      return kRunFailed;
    }
  return kOk;
}
