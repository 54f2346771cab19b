#include "manet/metrics.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace manet {

void
PacketTrace::RecordGenerated (const AppPacket &packet)
{
  auto key = std::make_pair (packet.flowId, packet.seq);
  if (m_index.count (key))
    {
      return;
    }
  m_index.emplace (key, m_records.size ());
  m_records.push_back (PacketRecord{packet.flowId, packet.seq, packet.generatedAt, std::nullopt, 0,
                                    packet.size});
}

bool
PacketTrace::RecordReceived (const AppPacket &packet, SimTime at, uint32_t hops)
{
  auto it = m_index.find ({packet.flowId, packet.seq});
  if (it == m_index.end ())
    {
      return false;
    }
  PacketRecord &r = m_records[it->second];
  if (r.receivedAt)
    {
      return false;
    }
  r.receivedAt = at;
  r.hops = hops;
  return true;
}

void
PacketTrace::CountControl (const std::string &kind, uint32_t bytes)
{
  m_controlBytes[kind] += bytes;
}

uint64_t
PacketTrace::TotalControlBytes () const
{
  uint64_t total = 0;
  for (const auto &[kind, bytes] : m_controlBytes)
    {
      total += bytes;
    }
  return total;
}

PacketTrace
PacketTrace::Since (SimTime from) const
{
  PacketTrace out;
  out.m_controlBytes = m_controlBytes;
  for (const auto &r : m_records)
    {
      if (r.generatedAt >= from)
        {
          out.m_index.emplace (std::make_pair (r.flowId, r.seq), out.m_records.size ());
          out.m_records.push_back (r);
        }
    }
  return out;
}

void
PacketTrace::WriteCsv (std::ostream &os) const
{
  os << "flow,seq,generated_at,received_at,hops\n";
  for (const auto &r : m_records)
    {
      os << r.flowId << ',' << r.seq << ',' << r.generatedAt.ToString () << ',';
      if (r.receivedAt)
        {
          os << r.receivedAt->ToString ();
        }
      os << ',' << r.hops << '\n';
    }
}

namespace {

uint32_t
ParseCount (const std::string &text, size_t line)
{
  try
    {
      size_t used = 0;
      unsigned long v = std::stoul (text, &used);
      if (used != text.size ())
        {
          throw std::invalid_argument (text);
        }
      return static_cast<uint32_t> (v);
    }
  catch (const std::exception &)
    {
      throw TraceFormatError ("line " + std::to_string (line) + ": bad integer '" + text + "'");
    }
}

SimTime
ParseTime (const std::string &text, size_t line)
{
  try
    {
      return SimTime::Parse (text);
    }
  catch (const std::exception &)
    {
      throw TraceFormatError ("line " + std::to_string (line) + ": bad time '" + text + "'");
    }
}

} // namespace

PacketTrace
PacketTrace::ReadCsv (std::istream &is, uint32_t packetSize)
{
  PacketTrace trace;
  std::string line;
  if (!std::getline (is, line) || line != "flow,seq,generated_at,received_at,hops")
    {
      throw TraceFormatError ("missing trace header");
    }
  size_t lineNo = 1;
  while (std::getline (is, line))
    {
      ++lineNo;
      if (line.empty ())
        {
          continue;
        }
      std::vector<std::string> cols;
      std::stringstream ss (line);
      std::string col;
      while (std::getline (ss, col, ','))
        {
          cols.push_back (col);
        }
      if (!line.empty () && line.back () == ',')
        {
          cols.emplace_back ();
        }
      if (cols.size () != 5)
        {
          throw TraceFormatError ("line " + std::to_string (lineNo) + ": expected 5 columns");
        }
      AppPacket p{ParseCount (cols[0], lineNo), ParseCount (cols[1], lineNo),
                  ParseTime (cols[2], lineNo), packetSize};
      trace.RecordGenerated (p);
      if (!cols[3].empty ())
        {
          trace.RecordReceived (p, ParseTime (cols[3], lineNo), ParseCount (cols[4], lineNo));
        }
    }
  return trace;
}

double
ComputePdr (const PacketTrace &trace)
{
  uint64_t sent = trace.Records ().size ();
  if (sent == 0)
    {
      throw NoTraffic ();
    }
  uint64_t received = std::count_if (trace.Records ().begin (), trace.Records ().end (),
                                     [] (const PacketRecord &r) { return r.receivedAt.has_value (); });
  return 100.0 * static_cast<double> (received) / static_cast<double> (sent);
}

double
ComputeThroughput (const PacketTrace &trace)
{
  std::optional<SimTime> firstGenerated;
  std::optional<SimTime> lastReceived;
  uint64_t bytes = 0;
  for (const auto &r : trace.Records ())
    {
      if (!firstGenerated || r.generatedAt < *firstGenerated)
        {
          firstGenerated = r.generatedAt;
        }
      if (r.receivedAt)
        {
          bytes += r.size;
          if (!lastReceived || *r.receivedAt > *lastReceived)
            {
              lastReceived = r.receivedAt;
            }
        }
    }
  if (!lastReceived)
    {
      throw NothingReceived ();
    }
  int64_t window = (*lastReceived - *firstGenerated).Micros ();
  return static_cast<double> (bytes * 8) * 1e6 / static_cast<double> (window);
}

double
ComputeAvgDelay (const PacketTrace &trace)
{
  int64_t total = 0;
  uint64_t delivered = 0;
  for (const auto &r : trace.Records ())
    {
      if (r.receivedAt)
        {
          total += (*r.receivedAt - r.generatedAt).Micros ();
          ++delivered;
        }
    }
  if (delivered == 0)
    {
      throw NothingReceived ();
    }
  return static_cast<double> (total) / static_cast<double> (delivered) / 1e6;
}

MetricsRecord
ComputeMetrics (const PacketTrace &trace)
{
  MetricsRecord m;
  m.pdr = ComputePdr (trace);
  m.packetsSent = trace.Records ().size ();
  m.packetsReceived = std::count_if (trace.Records ().begin (), trace.Records ().end (),
                                     [] (const PacketRecord &r) { return r.receivedAt.has_value (); });
  m.controlBytes = trace.TotalControlBytes ();
  if (m.packetsReceived > 0)
    {
      m.throughput = ComputeThroughput (trace);
      m.avgDelay = ComputeAvgDelay (trace);
    }
  return m;
}

} // namespace manet
