#ifndef MANET_METRICS_H
#define MANET_METRICS_H

#include "manet/packet.h"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet {

class NoTraffic : public std::runtime_error
{
public:
  NoTraffic ()
    : std::runtime_error ("no packets were sent")
  {
  }
};

class NothingReceived : public std::runtime_error
{
public:
  NothingReceived ()
    : std::runtime_error ("no packets were received")
  {
  }
};

class TraceFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct PacketRecord
{
  uint32_t flowId = 0;
  uint32_t seq = 0;
  SimTime generatedAt;
  std::optional<SimTime> receivedAt;
  uint32_t hops = 0;
  uint32_t size = 512;

  bool operator== (const PacketRecord &) const = default;
};

/// Per-packet fate plus control overhead for one run.
class PacketTrace
{
public:
  void RecordGenerated (const AppPacket &packet);

  /// First delivery wins; later copies of the same packet are ignored. Returns
  /// false for unknown or duplicate packets.
  bool RecordReceived (const AppPacket &packet, SimTime at, uint32_t hops);

  void CountControl (const std::string &kind, uint32_t bytes);

  const std::vector<PacketRecord> &
  Records () const
  {
    return m_records;
  }

  const std::map<std::string, uint64_t> &
  ControlBytes () const
  {
    return m_controlBytes;
  }

  uint64_t TotalControlBytes () const;

  /// Only packets generated at or after `from`; control counters are copied as is.
  PacketTrace Since (SimTime from) const;

  /// CSV with header flow,seq,generated_at,received_at,hops; lost packets have
  /// an empty received_at.
  void WriteCsv (std::ostream &os) const;

  /// Inverse of WriteCsv. The CSV does not carry sizes, so every record gets
  /// packetSize.
  static PacketTrace ReadCsv (std::istream &is, uint32_t packetSize = 512);

private:
  std::vector<PacketRecord> m_records;
  std::map<std::pair<uint32_t, uint32_t>, size_t> m_index;
  std::map<std::string, uint64_t> m_controlBytes;
};

struct MetricsRecord
{
  double throughput = 0;  // bits/second
  double pdr = 0;         // percent
  std::optional<double> avgDelay;  // seconds; empty when nothing arrived
  uint64_t controlBytes = 0;
  uint64_t packetsSent = 0;
  uint64_t packetsReceived = 0;

  bool operator== (const MetricsRecord &) const = default;
};

/// 100 * received / sent. Throws NoTraffic.
double ComputePdr (const PacketTrace &trace);

/// Delivered bits over (last reception - first generation). Throws NothingReceived.
double ComputeThroughput (const PacketTrace &trace);

/// Mean delay of delivered packets in seconds. Throws NothingReceived.
double ComputeAvgDelay (const PacketTrace &trace);

/// All metrics at once. Throughput is 0 and delay empty when nothing arrived;
/// throws NoTraffic when nothing was sent.
MetricsRecord ComputeMetrics (const PacketTrace &trace);

} // namespace manet

#endif
