#ifndef MANET_SWEEP_H
#define MANET_SWEEP_H

#include "manet/scenario.h"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace manet {

/// The pause-time by node-count by protocol grid, replicated over seeds.
struct SweepSpec
{
  std::vector<Protocol> protocols{Protocol::Dsdv, Protocol::Aodv, Protocol::Dsr};
  std::vector<uint32_t> nodeCounts{50, 75, 100};
  /// nullopt entries mean static nodes.
  std::vector<std::optional<SimTime>> pauseTimes{Seconds (20), Seconds (40), Seconds (60),
                                                 Seconds (80), Seconds (100)};
  uint32_t seedsPerCell = 5;

  size_t
  CellCount () const
  {
    return protocols.size () * nodeCounts.size () * pauseTimes.size () * seedsPerCell;
  }
};

std::vector<FieldError> CheckSweep (const SweepSpec &spec);

/// Throws ConfigInvalid.
void ValidateSweep (const SweepSpec &spec);

struct CellResult
{
  Protocol protocol = Protocol::Dsdv;
  uint32_t nodes = 0;
  std::optional<SimTime> pause;
  uint32_t replicate = 0;
  uint64_t seed = 0;
  std::optional<MetricsRecord> metrics;
  /// Why the cell failed; empty on success.
  std::string error;
};

struct SweepResult
{
  SweepSpec spec;
  /// Ordered by protocol, node count, pause time, replicate, following the SweepSpec lists.
  std::vector<CellResult> cells;

  size_t Failures () const;
};

struct SweepOptions
{
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
  /// When set, each cell's measured trace goes to traceDir/trace_<cell>.csv.
  std::optional<std::filesystem::path> traceDir;
  /// Called after each cell finishes, serialized across workers.
  std::function<void (const CellResult &)> progress;
};

/// Runs every cell. A cell that throws is recorded as failed and the rest still
/// run. Replicate r uses seed base.seed + r, so protocols share mobility and
/// traffic draws within a replicate.
SweepResult RunSweep (const SweepSpec &spec, const ScenarioConfig &base,
                      const SweepOptions &options = {});

/// The configuration a cell runs with.
ScenarioConfig CellConfig (const ScenarioConfig &base, Protocol protocol, uint32_t nodes,
                           std::optional<SimTime> pause, uint32_t replicate);

/// File-name-safe label such as "AODV_n50_p20_r3".
std::string CellName (const CellResult &cell);

/// "20", "12.5" or "static".
std::string FormatPause (std::optional<SimTime> pause);

/// Inverse of FormatPause.
std::optional<SimTime> ParsePause (const std::string &text);

enum class Metric
{
  Throughput,
  Pdr,
  Delay,
};

inline constexpr Metric kAllMetrics[] = {Metric::Throughput, Metric::Pdr, Metric::Delay};

/// "throughput", "pdr", "delay".
const char *ToString (Metric m);

/// Rows are pause times, columns protocol x node count, cells the mean over
/// successful replicates (empty when none has a value).
struct MetricTable
{
  struct Column
  {
    Protocol protocol;
    uint32_t nodes;

    bool operator== (const Column &) const = default;
  };

  std::vector<std::string> pauses;
  std::vector<Column> columns;
  std::vector<std::vector<std::optional<double>>> values;

  bool operator== (const MetricTable &) const = default;
};

MetricTable BuildTable (const SweepResult &result, Metric metric);

/// Header "pause,<PROTOCOL>_<nodes>,...", grouped by node count.
void WriteTable (std::ostream &os, const MetricTable &table);

/// Inverse of WriteTable. Throws std::runtime_error on malformed input.
MetricTable ReadTable (std::istream &is);

/// One row per cell with every metric and the failure message if any.
void WriteRawCsv (std::ostream &os, const SweepResult &result);

/// One whitespace-separated file per node count, fig_<metric>_<nodes>.dat:
/// pause time then one column per protocol. Returns the files written.
std::vector<std::filesystem::path> EmitPlotData (const MetricTable &table, Metric metric,
                                                 const std::filesystem::path &dir);

/// throughput.csv, pdr.csv, delay.csv, raw.csv and every plot file.
void WriteSweepOutputs (const SweepResult &result, const std::filesystem::path &dir);

/// Number rendering shared by every output file.
std::string FormatValue (double v);

} // namespace manet

#endif
