#include "doctest.h"
#include "fakes.h"

#include "manet/dsr.h"
#include "manet/scenario.h"

using namespace manet;
using manet::test::FakeNode;
using manet::test::FrameFrom;
using manet::test::MakeData;

namespace {

constexpr NodeId A = 0, B = 1, C = 2, D = 3, E = 4;

SourceRoute
R (std::vector<NodeId> hops)
{
  return SourceRoute (std::move (hops));
}

} // namespace

TEST_CASE ("source routes reject repeated nodes")
{
  CHECK_THROWS_AS (SourceRoute ({1, 2, 1}), DuplicateHop);
  CHECK_FALSE (SourceRoute::TryMake ({3, 3}).has_value ());
  std::vector<NodeId> ab{A, B};
  std::vector<NodeId> cde{C, D, E};
  std::vector<NodeId> cbe{C, B, E};
  CHECK (SourceRoute::Concat (ab, cde)->Hops () == std::vector<NodeId>{A, B, C, D, E});
  CHECK_FALSE (SourceRoute::Concat (ab, cbe).has_value ());
}

TEST_CASE ("source route queries")
{
  auto r = R ({A, B, C, D});
  CHECK (r.ContainsLink (B, C));
  CHECK (r.ContainsLink (C, B));
  CHECK_FALSE (r.ContainsLink (A, C));
  CHECK (r.IndexOf (C) == size_t{2});
  CHECK (r.Slice (1, 3) == R ({B, C, D}));
  CHECK (r.Reversed () == R ({D, C, B, A}));
}

TEST_CASE ("header size grows by four bytes per hop")
{
  CHECK (DsrHeaderSize (3) == 28);
  for (size_t n = 2; n < 20; ++n)
    {
      CHECK (DsrHeaderSize (n + 1) - DsrHeaderSize (n) == 4);
    }
}

TEST_CASE ("route cache: capacity, FIFO eviction, shortest lookup, link purge")
{
  RouteCache cache (3);
  CHECK (cache.Insert (R ({A, B, C, D})));
  CHECK_FALSE (cache.Insert (R ({A, B, C, D})));
  CHECK (cache.Insert (R ({A, E, D})));
  CHECK (cache.Find (D) == R ({A, E, D}));
  CHECK (cache.Insert (R ({A, B})));
  CHECK (cache.Insert (R ({A, C})));
  CHECK (cache.Size () == 3);
  CHECK (cache.FindAll (D) == std::vector<SourceRoute>{R ({A, E, D})});

  RouteCache two;
  two.Insert (R ({A, B, C, D}));
  two.Insert (R ({A, E, D}));
  CHECK (two.PurgeLink (C, B) == 1);
  CHECK (two.Paths ().size () == 1);
  CHECK (two.Paths ()[0] == R ({A, E, D}));
  CHECK_FALSE (two.ContainsLink (B, C));
}

TEST_CASE ("send with a cached path leaves at once with the route header")
{
  FakeNode node (A);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({A, B, C}));
  CHECK (dsr.Send (MakeData (A, C)) == SendOutcome::Sent);
  auto data = node.SentOf<DsrData> ();
  REQUIRE (data.size () == 1);
  CHECK (data[0].nextHop == B);
  CHECK (data[0].size == 512 + 28);
  CHECK (data[0].As<DsrData> ()->route == R ({A, B, C}));
}

TEST_CASE ("send without a path buffers and starts discovery")
{
  FakeNode node (A);
  Dsr dsr (node);
  CHECK (dsr.Send (MakeData (A, D)) == SendOutcome::Buffered);
  CHECK (dsr.BufferedFor (D) == 1);
  CHECK (dsr.IsDiscovering (D));
  auto rreqs = node.SentOf<DsrRreq> ();
  REQUIRE (rreqs.size () == 1);
  CHECK (rreqs[0].As<DsrRreq> ()->record == std::vector<NodeId>{A});
  CHECK (rreqs[0].size == DsrRreqSize (1));
  // A second packet joins the buffer without another flood.
  dsr.Send (MakeData (A, D, 1));
  CHECK (node.SentOf<DsrRreq> ().size () == 1);
}

TEST_CASE ("send to self is delivered locally")
{
  FakeNode node (A);
  Dsr dsr (node);
  CHECK (dsr.Send (MakeData (A, A)) == SendOutcome::DeliveredLocally);
  CHECK (node.delivered.size () == 1);
  CHECK (node.sent.empty ());
}

TEST_CASE ("the target replies with the accumulated record")
{
  FakeNode node (C);
  Dsr dsr (node);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, C, {A, B}}, B) == ForwardDecision::Replied);
  auto reps = node.SentOf<DsrRrep> ();
  REQUIRE (reps.size () == 1);
  CHECK (reps[0].nextHop == B);
  CHECK (reps[0].As<DsrRrep> ()->path == R ({A, B, C}));
  CHECK (reps[0].As<DsrRrep> ()->returnRoute == std::vector<NodeId>{C, B, A});
}

TEST_CASE ("the target answers equal-length copies but not longer ones")
{
  FakeNode node (D);
  Dsr dsr (node);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, D, {A, B}}, B) == ForwardDecision::Replied);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, D, {A, C}}, C) == ForwardDecision::Replied);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, D, {A, C, E}}, E) == ForwardDecision::Discarded);
  CHECK (node.SentOf<DsrRrep> ().size () == 2);
}

TEST_CASE ("an intermediate with a cached suffix replies with the concatenation")
{
  FakeNode node (C);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({C, D, E}));
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, E, {A, B}}, B) == ForwardDecision::Replied);
  auto reps = node.SentOf<DsrRrep> ();
  REQUIRE (reps.size () == 1);
  CHECK (reps[0].As<DsrRrep> ()->path == R ({A, B, C, D, E}));
  CHECK (reps[0].As<DsrRrep> ()->returnRoute == std::vector<NodeId>{C, B, A});
}

TEST_CASE ("a cached suffix that would loop is not used")
{
  FakeNode node (C);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({C, B, E}));
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, E, {A, B}}, B) == ForwardDecision::Rebroadcast);
  auto rreqs = node.SentOf<DsrRreq> ();
  REQUIRE (rreqs.size () == 1);
  CHECK (rreqs[0].As<DsrRreq> ()->record == std::vector<NodeId>{A, B, C});
  CHECK (node.SentOf<DsrRrep> ().empty ());
}

TEST_CASE ("duplicates and records containing this node are discarded")
{
  FakeNode node (C);
  Dsr dsr (node);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, E, {A, B}}, B) == ForwardDecision::Rebroadcast);
  CHECK (dsr.HandleRreq (DsrRreq{A, 1, E, {A, D}}, D) == ForwardDecision::Discarded);
  CHECK (dsr.HandleRreq (DsrRreq{A, 2, E, {A, C, B}}, B) == ForwardDecision::Discarded);
  CHECK (node.SentOf<DsrRreq> ().size () == 1);
}

TEST_CASE ("the source caches every prefix of a reply and flushes")
{
  FakeNode node (A);
  Dsr dsr (node);
  dsr.Send (MakeData (A, D));
  node.sent.clear ();
  CHECK (dsr.HandleRrep (DsrRrep{R ({A, B, C, D}), {C, B, A}, 2}) == ForwardDecision::Completed);
  CHECK (dsr.Cache ().Find (B) == R ({A, B}));
  CHECK (dsr.Cache ().Find (C) == R ({A, B, C}));
  CHECK (dsr.Cache ().Find (D) == R ({A, B, C, D}));
  CHECK (node.SentOf<DsrData> ().size () == 1);
  CHECK_FALSE (dsr.IsDiscovering (D));

  SUBCASE ("a late reply is still cached as an alternate")
  {
    CHECK (dsr.HandleRrep (DsrRrep{R ({A, E, D}), {D, E, A}, 2}) == ForwardDecision::Completed);
    CHECK (dsr.Cache ().FindAll (D).size () == 2);
    CHECK (dsr.BufferedFor (D) == 0);
  }
}

TEST_CASE ("an intermediate caches its downstream slice and passes the reply on")
{
  FakeNode node (B);
  Dsr dsr (node);
  CHECK (dsr.HandleRrep (DsrRrep{R ({A, B, C, D}), {D, C, B, A}, 2}) == ForwardDecision::Forwarded);
  CHECK (dsr.Cache ().Find (D) == R ({B, C, D}));
  auto reps = node.SentOf<DsrRrep> ();
  REQUIRE (reps.size () == 1);
  CHECK (reps[0].nextHop == A);
  CHECK (reps[0].As<DsrRrep> ()->index == 3);
}

TEST_CASE ("both diamond paths are learned from one discovery")
{
  // A reaches D through either B or C, never directly.
  ScenarioConfig c;
  c.protocol = Protocol::Dsr;
  c.nodeCount = 4;
  c.nFlows = 1;
  c.pause = std::nullopt;
  c.mac.mode = MacMode::Ideal;
  c.simTime = Seconds (5);
  c.warmup = Seconds (0);
  SimulationHooks hooks;
  hooks.positions = std::vector<Position>{{0, 0}, {180, 120}, {180, -120}, {360, 0}};
  Flow f;
  f.src = A;
  f.dst = D;
  f.startAt = Seconds (1);
  hooks.flows = std::vector<Flow>{f};
  Simulation sim (c, hooks);
  sim.Run ();
  auto &src = sim.RoutingAs<Dsr> (A);
  auto paths = src.Cache ().FindAll (D);
  REQUIRE (paths.size () == 2);
  CHECK (paths[0].Size () == 3);
  CHECK (paths[1].Size () == 3);
  CHECK (paths[0] != paths[1]);
  CHECK (src.Stats ().discoveriesStarted == 1);
  CHECK (sim.Metrics ().pdr == 100.0);
}

TEST_CASE ("source-routed forwarding")
{
  SUBCASE ("the middle hop sends to the next address")
  {
    FakeNode node (B);
    Dsr dsr (node);
    dsr.ForwardSourceRouted (DsrData{MakeData (A, C), R ({A, B, C}), 0});
    auto data = node.SentOf<DsrData> ();
    REQUIRE (data.size () == 1);
    CHECK (data[0].nextHop == C);
    CHECK (data[0].As<DsrData> ()->index == 1);
    CHECK (data[0].As<DsrData> ()->packet.hops == 1);
  }
  SUBCASE ("the last hop delivers")
  {
    FakeNode node (C);
    Dsr dsr (node);
    // B counted the first hop before passing the packet on.
    DataPacket p = MakeData (A, C);
    p.hops = 1;
    dsr.ForwardSourceRouted (DsrData{p, R ({A, B, C}), 1});
    REQUIRE (node.delivered.size () == 1);
    CHECK (node.delivered[0].hops == 2);
  }
  SUBCASE ("a node off the route drops the packet")
  {
    FakeNode node (E);
    Dsr dsr (node);
    dsr.ForwardSourceRouted (DsrData{MakeData (A, C), R ({A, B, C}), 0});
    REQUIRE (node.dropped.size () == 1);
    CHECK (node.dropped[0].second == DropReason::MalformedRoute);
  }
}

TEST_CASE ("a broken hop reports back along the traversed prefix")
{
  FakeNode node (B);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({B, C, D}));
  dsr.Cache ().Insert (R ({B, E}));
  DsrData held{MakeData (A, D), R ({A, B, C, D}), 1};
  dsr.OnLinkFailure (C, FrameFrom (B, C, MakeMessage (held)));

  REQUIRE (node.dropped.size () == 1);
  CHECK (node.dropped[0].second == DropReason::LinkBroken);
  CHECK_FALSE (dsr.Cache ().ContainsLink (B, C));
  CHECK (dsr.Cache ().Size () == 1);
  auto errs = node.SentOf<DsrRouteError> ();
  REQUIRE (errs.size () == 1);
  CHECK (errs[0].nextHop == A);
  CHECK (errs[0].size == kDsrRouteErrorBytes);
  const auto *err = errs[0].As<DsrRouteError> ();
  CHECK (err->brokenFrom == B);
  CHECK (err->brokenTo == C);
  CHECK (err->reporter == B);
  CHECK (err->originalSource == A);
  CHECK (err->returnRoute == std::vector<NodeId>{B, A});
}

TEST_CASE ("route errors at the source")
{
  FakeNode node (A);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({A, B, C, D}));
  DsrRouteError err{B, B, C, A, {B, A}, 1};

  SUBCASE ("only paths avoiding the broken link survive")
  {
    dsr.Cache ().Insert (R ({A, E, D}));
    dsr.HandleRouteError (err);
    CHECK (dsr.Cache ().FindAll (D) == std::vector<SourceRoute>{R ({A, E, D})});
  }
  SUBCASE ("with an alternate, data goes that way and no discovery starts")
  {
    dsr.Cache ().Insert (R ({A, E, D}));
    dsr.HandleRouteError (err);
    CHECK (dsr.Send (MakeData (A, D)) == SendOutcome::Sent);
    CHECK (node.SentOf<DsrData> ()[0].nextHop == E);
    CHECK (dsr.Stats ().discoveriesStarted == 0);
  }
  SUBCASE ("without one, pending data causes exactly one discovery")
  {
    dsr.HandleRouteError (err);
    for (uint32_t i = 0; i < 3; ++i)
      {
        CHECK (dsr.Send (MakeData (A, D, i)) == SendOutcome::Buffered);
      }
    CHECK (dsr.Stats ().discoveriesStarted == 1);
    CHECK (node.SentOf<DsrRreq> ().size () == 1);
  }
  SUBCASE ("buffered data flushes onto a surviving path")
  {
    dsr.Send (MakeData (A, E));   // buffered, discovery for E running
    dsr.Cache ().Insert (R ({A, D, E}));
    node.sent.clear ();
    dsr.HandleRouteError (err);
    CHECK (dsr.BufferedFor (E) == 0);
    CHECK_FALSE (dsr.IsDiscovering (E));
    REQUIRE (node.SentOf<DsrData> ().size () == 1);
    CHECK (node.SentOf<DsrData> ()[0].nextHop == D);
  }
}

TEST_CASE ("an intermediate on the return path purges and forwards the error")
{
  FakeNode node (B);
  Dsr dsr (node);
  dsr.Cache ().Insert (R ({B, C, D}));
  dsr.Cache ().Insert (R ({B, A}));
  // C reported C->D broken on route [A, B, C, D]; the error travels C, B, A.
  dsr.HandleRouteError (DsrRouteError{C, C, D, A, {C, B, A}, 1});
  CHECK_FALSE (dsr.Cache ().ContainsLink (C, D));
  auto errs = node.SentOf<DsrRouteError> ();
  REQUIRE (errs.size () == 1);
  CHECK (errs[0].nextHop == A);
  CHECK (errs[0].As<DsrRouteError> ()->index == 2);
}

TEST_CASE ("random construction and concatenation never yields a repeated node")
{
  RngStream rng (8, "test");
  for (int i = 0; i < 20000; ++i)
    {
      std::vector<NodeId> a, b;
      size_t la = 1 + rng.UniformInt (uint64_t{6});
      size_t lb = 1 + rng.UniformInt (uint64_t{6});
      for (size_t k = 0; k < la; ++k)
        {
          a.push_back (static_cast<NodeId> (rng.UniformInt (uint64_t{12})));
        }
      for (size_t k = 0; k < lb; ++k)
        {
          b.push_back (static_cast<NodeId> (rng.UniformInt (uint64_t{12})));
        }
      std::vector<NodeId> joined = a;
      joined.insert (joined.end (), b.begin (), b.end ());
      std::sort (joined.begin (), joined.end ());
      bool unique = std::adjacent_find (joined.begin (), joined.end ()) == joined.end ();
      auto r = SourceRoute::Concat (a, b);
      REQUIRE (r.has_value () == unique);
    }
}
