#include "manet/sweep.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace manet {

std::string
FormatValue (double v)
{
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision)
    {
      std::snprintf (buf, sizeof buf, "%.*g", precision, v);
      if (std::strtod (buf, nullptr) == v)
        {
          break;
        }
    }
  return buf;
}

std::string
FormatPause (std::optional<SimTime> pause)
{
  if (!pause)
    {
      return "static";
    }
  int64_t us = pause->Micros ();
  if (us % 1000000 == 0)
    {
      return std::to_string (us / 1000000);
    }
  std::string text = pause->ToString ();
  while (text.back () == '0')
    {
      text.pop_back ();
    }
  return text;
}

std::optional<SimTime>
ParsePause (const std::string &text)
{
  if (text == "static" || text == "STATIC")
    {
      return std::nullopt;
    }
  return SimTime::Parse (text);
}

const char *
ToString (Metric m)
{
  switch (m)
    {
    case Metric::Throughput:
      return "throughput";
    case Metric::Pdr:
      return "pdr";
    case Metric::Delay:
      return "delay";
    }
  return "?";
}

std::vector<FieldError>
CheckSweep (const SweepSpec &spec)
{
  std::vector<FieldError> errors;
  if (spec.protocols.empty ())
    {
      errors.push_back ({"protocols", "list is empty"});
    }
  if (spec.nodeCounts.empty ())
    {
      errors.push_back ({"node_counts", "list is empty"});
    }
  if (spec.pauseTimes.empty ())
    {
      errors.push_back ({"pause_times", "list is empty"});
    }
  if (spec.seedsPerCell == 0)
    {
      errors.push_back ({"seeds_per_cell", "must be positive"});
    }
  return errors;
}

void
ValidateSweep (const SweepSpec &spec)
{
  auto errors = CheckSweep (spec);
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
}

size_t
SweepResult::Failures () const
{
  size_t n = 0;
  for (const auto &c : cells)
    {
      n += c.metrics ? 0 : 1;
    }
  return n;
}

ScenarioConfig
CellConfig (const ScenarioConfig &base, Protocol protocol, uint32_t nodes,
            std::optional<SimTime> pause, uint32_t replicate)
{
  ScenarioConfig c = base;
  c.protocol = protocol;
  c.nodeCount = nodes;
  c.pause = pause;
  c.seed = base.seed + replicate;
  return c;
}

std::string
CellName (const CellResult &cell)
{
  return std::string (ToString (cell.protocol)) + "_n" + std::to_string (cell.nodes) + "_p"
         + FormatPause (cell.pause) + "_r" + std::to_string (cell.replicate);
}

SweepResult
RunSweep (const SweepSpec &spec, const ScenarioConfig &base, const SweepOptions &options)
{
  ValidateSweep (spec);
  SweepResult result;
  result.spec = spec;
  for (Protocol p : spec.protocols)
    {
      for (uint32_t n : spec.nodeCounts)
        {
          for (const auto &pause : spec.pauseTimes)
            {
              for (uint32_t r = 0; r < spec.seedsPerCell; ++r)
                {
                  CellResult cell;
                  cell.protocol = p;
                  cell.nodes = n;
                  cell.pause = pause;
                  cell.replicate = r;
                  cell.seed = base.seed + r;
                  result.cells.push_back (cell);
                }
            }
        }
    }

  std::atomic<size_t> next{0};
  std::mutex progressLock;
  auto worker = [&] () {
    for (size_t i = next++; i < result.cells.size (); i = next++)
      {
        CellResult &cell = result.cells[i];
        try
          {
            ScenarioConfig config
                = CellConfig (base, cell.protocol, cell.nodes, cell.pause, cell.replicate);
            if (options.traceDir)
              {
                std::ofstream trace (*options.traceDir / ("trace_" + CellName (cell) + ".csv"));
                cell.metrics = RunScenario (config, &trace);
              }
            else
              {
                cell.metrics = RunScenario (config);
              }
          }
        catch (const std::exception &e)
          {
            cell.error = e.what ();
          }
        if (options.progress)
          {
            std::lock_guard<std::mutex> guard (progressLock);
            options.progress (cell);
          }
      }
  };

  unsigned jobs = options.jobs ? options.jobs : std::max (1u, std::thread::hardware_concurrency ());
  jobs = static_cast<unsigned> (std::min<size_t> (jobs, result.cells.size ()));
  if (jobs <= 1)
    {
      worker ();
    }
  else
    {
      std::vector<std::thread> threads;
      for (unsigned t = 0; t < jobs; ++t)
        {
          threads.emplace_back (worker);
        }
      for (auto &t : threads)
        {
          t.join ();
        }
    }
  return result;
}

namespace {

std::optional<double>
MetricOf (const MetricsRecord &m, Metric metric)
{
  switch (metric)
    {
    case Metric::Throughput:
      return m.throughput;
    case Metric::Pdr:
      return m.pdr;
    case Metric::Delay:
      return m.avgDelay;
    }
  return std::nullopt;
}

std::vector<std::string>
SplitCsv (const std::string &line)
{
  std::vector<std::string> out;
  std::stringstream ss (line);
  std::string item;
  while (std::getline (ss, item, ','))
    {
      out.push_back (item);
    }
  if (!line.empty () && line.back () == ',')
    {
      out.emplace_back ();
    }
  return out;
}

} // namespace

MetricTable
BuildTable (const SweepResult &result, Metric metric)
{
  const SweepSpec &spec = result.spec;
  MetricTable table;
  for (uint32_t n : spec.nodeCounts)
    {
      for (Protocol p : spec.protocols)
        {
          table.columns.push_back ({p, n});
        }
    }
  for (const auto &pause : spec.pauseTimes)
    {
      table.pauses.push_back (FormatPause (pause));
    }

  // Sums are accumulated in cell order so the mean does not depend on which
  // worker finished first.
  std::map<std::tuple<Protocol, uint32_t, std::string>, std::pair<double, uint32_t>> sums;
  for (const auto &cell : result.cells)
    {
      if (!cell.metrics)
        {
          continue;
        }
      auto v = MetricOf (*cell.metrics, metric);
      if (!v)
        {
          continue;
        }
      auto &s = sums[{cell.protocol, cell.nodes, FormatPause (cell.pause)}];
      s.first += *v;
      s.second += 1;
    }

  for (const auto &pause : table.pauses)
    {
      std::vector<std::optional<double>> row;
      for (const auto &col : table.columns)
        {
          auto it = sums.find ({col.protocol, col.nodes, pause});
          if (it == sums.end ())
            {
              row.push_back (std::nullopt);
            }
          else
            {
              row.push_back (it->second.first / it->second.second);
            }
        }
      table.values.push_back (std::move (row));
    }
  return table;
}

void
WriteTable (std::ostream &os, const MetricTable &table)
{
  os << "pause";
  for (const auto &col : table.columns)
    {
      os << ',' << ToString (col.protocol) << '_' << col.nodes;
    }
  os << '\n';
  for (size_t r = 0; r < table.pauses.size (); ++r)
    {
      os << table.pauses[r];
      for (const auto &v : table.values[r])
        {
          os << ',';
          if (v)
            {
              os << FormatValue (*v);
            }
        }
      os << '\n';
    }
}

MetricTable
ReadTable (std::istream &is)
{
  MetricTable table;
  std::string line;
  if (!std::getline (is, line))
    {
      throw std::runtime_error ("empty metric table");
    }
  auto header = SplitCsv (line);
  if (header.empty () || header[0] != "pause")
    {
      throw std::runtime_error ("metric table header must start with 'pause'");
    }
  for (size_t i = 1; i < header.size (); ++i)
    {
      size_t us = header[i].rfind ('_');
      if (us == std::string::npos)
        {
          throw std::runtime_error ("bad column '" + header[i] + "'");
        }
      try
        {
          table.columns.push_back ({ParseProtocol (header[i].substr (0, us)),
                                    static_cast<uint32_t> (std::stoul (header[i].substr (us + 1)))});
        }
      catch (const std::exception &)
        {
          throw std::runtime_error ("bad column '" + header[i] + "'");
        }
    }
  while (std::getline (is, line))
    {
      if (line.empty ())
        {
          continue;
        }
      auto cols = SplitCsv (line);
      if (cols.size () != header.size ())
        {
          throw std::runtime_error ("row '" + line + "' has the wrong number of columns");
        }
      table.pauses.push_back (cols[0]);
      std::vector<std::optional<double>> row;
      for (size_t i = 1; i < cols.size (); ++i)
        {
          if (cols[i].empty ())
            {
              row.push_back (std::nullopt);
              continue;
            }
          char *end = nullptr;
          double v = std::strtod (cols[i].c_str (), &end);
          if (end != cols[i].c_str () + cols[i].size ())
            {
              throw std::runtime_error ("bad value '" + cols[i] + "'");
            }
          row.push_back (v);
        }
      table.values.push_back (std::move (row));
    }
  return table;
}

void
WriteRawCsv (std::ostream &os, const SweepResult &result)
{
  os << "protocol,nodes,pause,replicate,seed,throughput,pdr,delay,control_bytes,sent,received,"
        "error\n";
  for (const auto &cell : result.cells)
    {
      os << ToString (cell.protocol) << ',' << cell.nodes << ',' << FormatPause (cell.pause) << ','
         << cell.replicate << ',' << cell.seed << ',';
      if (cell.metrics)
        {
          const MetricsRecord &m = *cell.metrics;
          os << FormatValue (m.throughput) << ',' << FormatValue (m.pdr) << ','
             << (m.avgDelay ? FormatValue (*m.avgDelay) : "") << ',' << m.controlBytes << ','
             << m.packetsSent << ',' << m.packetsReceived << ',';
        }
      else
        {
          std::string err = cell.error;
          for (char &c : err)
            {
              if (c == ',' || c == '\n')
                {
                  c = ' ';
                }
            }
          os << ",,,,,," << err;
        }
      os << '\n';
    }
}

std::vector<std::filesystem::path>
EmitPlotData (const MetricTable &table, Metric metric, const std::filesystem::path &dir)
{
  std::vector<uint32_t> nodeCounts;
  std::vector<Protocol> protocols;
  for (const auto &col : table.columns)
    {
      if (std::find (nodeCounts.begin (), nodeCounts.end (), col.nodes) == nodeCounts.end ())
        {
          nodeCounts.push_back (col.nodes);
        }
      if (std::find (protocols.begin (), protocols.end (), col.protocol) == protocols.end ())
        {
          protocols.push_back (col.protocol);
        }
    }

  std::vector<std::filesystem::path> written;
  for (uint32_t n : nodeCounts)
    {
      auto path = dir / ("fig_" + std::string (ToString (metric)) + "_" + std::to_string (n) + ".dat");
      std::ofstream out (path);
      if (!out)
        {
          throw std::runtime_error ("cannot write '" + path.string () + "'");
        }
      out << "# pause";
      for (Protocol p : protocols)
        {
          out << ' ' << ToString (p);
        }
      out << '\n';
      for (size_t r = 0; r < table.pauses.size (); ++r)
        {
          out << table.pauses[r];
          for (Protocol p : protocols)
            {
              std::optional<double> v;
              for (size_t c = 0; c < table.columns.size (); ++c)
                {
                  if (table.columns[c] == MetricTable::Column{p, n})
                    {
                      v = table.values[r][c];
                    }
                }
              out << ' ' << (v ? FormatValue (*v) : "nan");
            }
          out << '\n';
        }
      written.push_back (path);
    }
  return written;
}

void
WriteSweepOutputs (const SweepResult &result, const std::filesystem::path &dir)
{
  std::filesystem::create_directories (dir);
  for (Metric m : kAllMetrics)
    {
      MetricTable table = BuildTable (result, m);
      std::ofstream out (dir / (std::string (ToString (m)) + ".csv"));
      WriteTable (out, table);
      EmitPlotData (table, m, dir);
    }
  std::ofstream raw (dir / "raw.csv");
  WriteRawCsv (raw, result);
}

} // namespace manet
