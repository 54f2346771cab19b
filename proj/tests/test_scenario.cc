#include "doctest.h"

#include "manet/config.h"
#include "manet/scenario.h"
#include "manet/sweep.h"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace manet;
namespace fs = std::filesystem;

namespace {

fs::path
FreshDir (const std::string &name)
{
  fs::path dir = fs::temp_directory_path () / ("manet_test_" + name);
  fs::remove_all (dir);
  fs::create_directories (dir);
  return dir;
}

std::string
Slurp (const fs::path &p)
{
  std::ifstream in (p);
  std::ostringstream os;
  os << in.rdbuf ();
  return os.str ();
}

std::vector<std::string>
Lines (const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream is (text);
  for (std::string line; std::getline (is, line);)
    {
      out.push_back (line);
    }
  return out;
}

size_t
Fields (const std::string &line, char sep)
{
  if (sep == ' ')
    {
      std::istringstream is (line);
      size_t n = 0;
      for (std::string tok; is >> tok;)
        {
          ++n;
        }
      return n;
    }
  return static_cast<size_t> (std::count (line.begin (), line.end (), sep)) + 1;
}

ScenarioConfig
ShortBase ()
{
  ScenarioConfig c;
  c.simTime = Seconds (15);
  c.warmup = Seconds (5);
  c.drain = Seconds (1);
  return c;
}

} // namespace

TEST_CASE ("two static nodes in range deliver everything with each protocol")
{
  for (Protocol p : {Protocol::Dsdv, Protocol::Aodv, Protocol::Dsr})
    {
      CAPTURE (ToString (p));
      ScenarioConfig c;
      c.protocol = p;
      c.nodeCount = 2;
      c.nFlows = 1;
      c.pause = std::nullopt;
      c.mac.mode = MacMode::Ideal;
      c.simTime = Seconds (30);
      SimulationHooks hooks;
      hooks.positions = std::vector<Position>{{100, 100}, {200, 100}};
      Simulation sim (c, hooks);
      sim.Run ();
      auto m = sim.Metrics ();
      CHECK (m.packetsSent > 0);
      CHECK (m.pdr == 100.0);
    }
}

TEST_CASE ("a single node is rejected before the run")
{
  ScenarioConfig c;
  c.nodeCount = 1;
  c.nFlows = 1;
  CHECK_THROWS_AS (Simulation sim (c), ConfigInvalid);
  try
    {
      ValidateConfig (c);
      FAIL ("expected ConfigInvalid");
    }
  catch (const ConfigInvalid &e)
    {
      REQUIRE_FALSE (e.Errors ().empty ());
      CHECK (e.Errors ()[0].field == "nodes");
    }
}

TEST_CASE ("every violated field is reported at once")
{
  ScenarioConfig c;
  c.nodeCount = 10;
  c.nFlows = 6;
  c.rate = 0;
  c.minSpeed = 0;
  auto errors = CheckConfig (c);
  std::set<std::string> fields;
  for (const auto &e : errors)
    {
      fields.insert (e.field);
    }
  CHECK (fields == std::set<std::string>{"flows", "rate", "min_speed"});
  CHECK (CheckConfig (ScenarioConfig{}).empty ());
}

TEST_CASE ("config text round-trips through the formatter")
{
  ScenarioConfig c;
  c.protocol = Protocol::Dsr;
  c.nodeCount = 75;
  c.pause = Millis (12500);
  c.seed = 99;
  c.mac.mode = MacMode::Ideal;
  c.rate = 2.5;
  std::istringstream is (FormatScenario (c));
  CHECK (ParseConfig (is).scenario == c);

  ScenarioConfig still;
  still.pause = std::nullopt;
  std::istringstream is2 (FormatScenario (still));
  CHECK (ParseConfig (is2).scenario == still);
}

TEST_CASE ("config files accept comments and sweep lists")
{
  std::istringstream is ("# a comment\n"
                         "\n"
                         "protocol = aodv\n"
                         "nodes = 20\n"
                         "pause = static\n"
                         "protocols = DSDV, DSR\n"
                         "node_counts = 10, 20\n"
                         "pause_times = 0, static\n"
                         "seeds_per_cell = 2\n");
  auto cfg = ParseConfig (is);
  CHECK (cfg.scenario.protocol == Protocol::Aodv);
  CHECK (cfg.scenario.nodeCount == 20);
  CHECK_FALSE (cfg.scenario.pause.has_value ());
  CHECK (cfg.sweep.protocols == std::vector<Protocol>{Protocol::Dsdv, Protocol::Dsr});
  CHECK (cfg.sweep.nodeCounts == std::vector<uint32_t>{10, 20});
  REQUIRE (cfg.sweep.pauseTimes.size () == 2);
  CHECK (cfg.sweep.pauseTimes[0] == SimTime ());
  CHECK_FALSE (cfg.sweep.pauseTimes[1].has_value ());
  CHECK (cfg.sweep.CellCount () == 2 * 2 * 2 * 2);
}

TEST_CASE ("bad config lines are all reported")
{
  std::istringstream is ("nodes = many\nbogus = 1\nprotocol = olsr\nno equals sign\n");
  try
    {
      ParseConfig (is);
      FAIL ("expected ConfigInvalid");
    }
  catch (const ConfigInvalid &e)
    {
      CHECK (e.Errors ().size () == 4);
    }
}

TEST_CASE ("pause labels")
{
  CHECK (FormatPause (Seconds (20)) == "20");
  CHECK (FormatPause (Millis (12500)) == "12.5");
  CHECK (FormatPause (std::nullopt) == "static");
  CHECK (ParsePause ("12.5") == Millis (12500));
  CHECK_FALSE (ParsePause ("static").has_value ());
}

TEST_CASE ("an empty protocol list is rejected")
{
  SweepSpec s;
  s.protocols.clear ();
  CHECK_THROWS_AS (ValidateSweep (s), ConfigInvalid);
  CHECK_THROWS_AS (RunSweep (s, ShortBase ()), ConfigInvalid);
}

TEST_CASE ("the default grid has 225 cells over five seeds")
{
  SweepSpec s;
  CHECK (s.CellCount () == 225);
}

TEST_CASE ("a one-seed default sweep fills every table")
{
  SweepSpec s;
  s.seedsPerCell = 1;
  auto result = RunSweep (s, ShortBase ());
  REQUIRE (result.cells.size () == 45);
  CHECK (result.Failures () == 0);

  // Cells are ordered protocol, node count, pause, replicate.
  CHECK (result.cells[0].protocol == Protocol::Dsdv);
  CHECK (result.cells[0].nodes == 50);
  CHECK (result.cells[0].pause == Seconds (20));
  CHECK (result.cells[44].protocol == Protocol::Dsr);
  CHECK (result.cells[44].nodes == 100);
  CHECK (result.cells[44].pause == Seconds (100));

  auto dir = FreshDir ("sweep");
  WriteSweepOutputs (result, dir);
  for (Metric m : kAllMetrics)
    {
      CAPTURE (ToString (m));
      auto lines = Lines (Slurp (dir / (std::string (ToString (m)) + ".csv")));
      REQUIRE (lines.size () == 6);
      CHECK (lines[0].rfind ("pause,", 0) == 0);
      for (const auto &l : lines)
        {
          CHECK (Fields (l, ',') == 10);
        }
      std::ifstream in (dir / (std::string (ToString (m)) + ".csv"));
      auto table = ReadTable (in);
      CHECK (table == BuildTable (result, m));
      CHECK (table.values.size () == 5);
      CHECK (table.values[0].size () == 9);
    }

  auto raw = Lines (Slurp (dir / "raw.csv"));
  CHECK (raw.size () == 46);

  size_t plots = 0;
  for (const auto &entry : fs::directory_iterator (dir))
    {
      if (entry.path ().extension () == ".dat")
        {
          ++plots;
          auto lines = Lines (Slurp (entry.path ()));
          REQUIRE (lines.size () == 6);
          CHECK (lines[0].rfind ("#", 0) == 0);
          for (size_t i = 1; i < lines.size (); ++i)
            {
              CHECK (Fields (lines[i], ' ') == 4);
            }
        }
    }
  CHECK (plots == 9);
  fs::remove_all (dir);
}

TEST_CASE ("a single node count yields one plot file per metric")
{
  SweepSpec s;
  s.nodeCounts = {20};
  s.pauseTimes = {Seconds (0), std::nullopt};
  s.seedsPerCell = 1;
  auto base = ShortBase ();
  base.nFlows = 5;
  auto result = RunSweep (s, base);
  auto dir = FreshDir ("single");
  std::vector<fs::path> all;
  for (Metric m : kAllMetrics)
    {
      auto written = EmitPlotData (BuildTable (result, m), m, dir);
      CHECK (written.size () == 1);
      all.insert (all.end (), written.begin (), written.end ());
    }
  CHECK (all.size () == 3);
  CHECK (all[0].filename () == "fig_throughput_20.dat");
  fs::remove_all (dir);
}

TEST_CASE ("a failing cell is recorded and the rest still run")
{
  SweepSpec s;
  s.protocols = {Protocol::Aodv};
  s.nodeCounts = {4, 20};
  s.pauseTimes = {Seconds (0)};
  s.seedsPerCell = 1;
  auto base = ShortBase ();
  base.nFlows = 5;
  auto result = RunSweep (s, base);
  REQUIRE (result.cells.size () == 2);
  CHECK (result.Failures () == 1);
  CHECK_FALSE (result.cells[0].metrics.has_value ());
  CHECK_FALSE (result.cells[0].error.empty ());
  CHECK (result.cells[1].metrics.has_value ());
  std::ostringstream os;
  WriteRawCsv (os, result);
  auto lines = Lines (os.str ());
  REQUIRE (lines.size () == 3);
  CHECK (Fields (lines[1], ',') == Fields (lines[0], ','));
}

TEST_CASE ("replicates get consecutive seeds and share them across protocols")
{
  ScenarioConfig base;
  base.seed = 7;
  CHECK (CellConfig (base, Protocol::Aodv, 50, Seconds (20), 0).seed == 7);
  CHECK (CellConfig (base, Protocol::Dsr, 50, Seconds (20), 3).seed == 10);
  auto c = CellConfig (base, Protocol::Dsr, 75, std::nullopt, 1);
  CHECK (c.protocol == Protocol::Dsr);
  CHECK (c.nodeCount == 75);
  CHECK_FALSE (c.pause.has_value ());
}

TEST_CASE ("identical seeds give byte-identical outputs")
{
  SweepSpec s;
  s.nodeCounts = {30};
  s.pauseTimes = {Seconds (0)};
  s.seedsPerCell = 2;
  auto base = ShortBase ();
  std::string raw[2];
  std::string trace[2];
  for (int i = 0; i < 2; ++i)
    {
      SweepOptions opt;
      opt.jobs = i == 0 ? 1 : 4;
      std::ostringstream os;
      WriteRawCsv (os, RunSweep (s, base, opt));
      raw[i] = os.str ();
      std::ostringstream ts;
      ScenarioConfig c = base;
      c.protocol = Protocol::Dsr;
      c.nodeCount = 30;
      RunScenario (c, &ts);
      trace[i] = ts.str ();
    }
  CHECK (raw[0] == raw[1]);
  CHECK (trace[0] == trace[1]);
}
