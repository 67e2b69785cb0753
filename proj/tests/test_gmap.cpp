#include "oracles.hpp"
#include "test_util.hpp"

#include <chipmap/benchgen.hpp>
#include <chipmap/gmap.hpp>
#include <chipmap/partition.hpp>
#include <chipmap/sequence.hpp>

#include <random>

using namespace chipmap;
using testutil::grid_spec;
using testutil::linked_spec;

namespace {

long total_area(const std::vector<Rect>& rects) {
  long a = 0;
  for (const auto& r : rects) a += r.area();
  return a;
}

// The pieces plus `placed` cover `region` exactly once.
void expect_tiles(const Rect& region, const Rect& placed, const std::vector<Rect>& pieces) {
  std::vector<int> cover(static_cast<std::size_t>(region.area()), 0);
  auto mark = [&](const Rect& r) {
    ASSERT_TRUE(region.contains(r));
    for (int y = r.y; y < r.bottom(); ++y)
      for (int x = r.x; x < r.right(); ++x) ++cover[static_cast<std::size_t>((y - region.y) * region.w + x - region.x)];
  };
  mark(placed);
  for (const auto& p : pieces) {
    EXPECT_GT(p.area(), 0);
    mark(p);
  }
  for (int c : cover) EXPECT_EQ(c, 1);
}

}  // namespace

TEST(Guillotine, CornerSquareSplitsVertically) {
  const auto pieces = guillotine_split(Rect{0, 0, 4, 4}, Rect{0, 0, 2, 2});
  ASSERT_EQ(pieces.size(), 2u);
  EXPECT_EQ(pieces[0], (Rect{2, 0, 2, 4}));
  EXPECT_EQ(pieces[1], (Rect{0, 2, 2, 2}));
}

TEST(Guillotine, ExactFillLeavesNothing) {
  EXPECT_TRUE(guillotine_split(Rect{0, 0, 5, 5}, Rect{0, 0, 5, 5}).empty());
}

TEST(Guillotine, FullHeightStrip) {
  const auto pieces = guillotine_split(Rect{0, 0, 4, 4}, Rect{0, 0, 1, 4});
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0], (Rect{1, 0, 3, 4}));
}

TEST(Guillotine, ShorterLeftoverAxis) {
  // Leftover width 1, height 3: the cut runs horizontally.
  const auto pieces = guillotine_split(Rect{0, 0, 4, 5}, Rect{0, 0, 3, 2});
  ASSERT_EQ(pieces.size(), 2u);
  EXPECT_EQ(pieces[0], (Rect{3, 0, 1, 2}));
  EXPECT_EQ(pieces[1], (Rect{0, 2, 4, 3}));
}

TEST(Guillotine, InteriorPlacementTiles) {
  const Rect region{2, 3, 7, 6};
  const Rect placed{4, 5, 2, 2};
  const auto pieces = guillotine_split(region, placed);
  EXPECT_LE(pieces.size(), 4u);
  expect_tiles(region, placed, pieces);
}

TEST(Guillotine, RandomTilingProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Rect region{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4), 1 + static_cast<int>(rng() % 9),
                      1 + static_cast<int>(rng() % 9)};
    const int w = 1 + static_cast<int>(rng() % static_cast<unsigned>(region.w));
    const int h = 1 + static_cast<int>(rng() % static_cast<unsigned>(region.h));
    const Rect placed{region.x + static_cast<int>(rng() % static_cast<unsigned>(region.w - w + 1)),
                      region.y + static_cast<int>(rng() % static_cast<unsigned>(region.h - h + 1)), w, h};
    const auto pieces = guillotine_split(region, placed);
    EXPECT_EQ(total_area(pieces) + placed.area(), region.area());
    expect_tiles(region, placed, pieces);
  }
}

TEST(Placement, CenterModeCentres) {
  const auto be = ChipletBackend::build(grid_spec(1, 1, 7, 7));
  auto bins = BinState::init(be);
  const auto p = place_partition(bins, 0, 5, 5, PlacementMode::Center);
  EXPECT_EQ(p.chip, 0);
  EXPECT_EQ(p.rect, (Rect{1, 1, 5, 5}));
  EXPECT_EQ(oracle::rasterize_check(bins, be), "");
}

TEST(Placement, SizeAwareTakesTheCorner) {
  const auto be = ChipletBackend::build(grid_spec(1, 1, 7, 7));
  auto bins = BinState::init(be);
  EXPECT_EQ(place_partition(bins, 0, 5, 5, PlacementMode::SizeAware).rect, (Rect{0, 0, 5, 5}));
}

TEST(Placement, DefectShiftsTheAnchor) {
  auto spec = grid_spec(1, 1, 7, 7);
  spec.defects = {PhysCoord{0, 0, 0}};
  const auto be = ChipletBackend::build(spec);
  auto bins = BinState::init(be);
  EXPECT_EQ(bins.blocked_area(0), 1);
  const auto expected = oracle::raster_min_anchor(bins, 0, 5, 5);
  ASSERT_TRUE(expected.has_value());
  const auto p = place_partition(bins, 0, 5, 5, PlacementMode::SizeAware);
  EXPECT_EQ(p.rect, (Rect{1, 0, 5, 5}));
  EXPECT_EQ(std::pair(p.rect.x, p.rect.y), *expected);
  EXPECT_EQ(oracle::rasterize_check(bins, be), "");
}

TEST(Placement, RelativeHintRight) {
  const auto be = ChipletBackend::build(grid_spec(1, 1, 7, 7));
  auto bins = BinState::init(be);
  const auto ref = place_partition(bins, 0, 3, 3, PlacementMode::SizeAware);
  const auto p = place_partition_relative(bins, 1, 3, 3, ref, Direction::Right);
  EXPECT_EQ(p.rect, (Rect{3, 0, 3, 3}));
  const auto q = place_partition_relative(bins, 2, 3, 3, ref, Direction::Below);
  EXPECT_EQ(q.rect, (Rect{0, 3, 3, 3}));
}

TEST(Placement, RelativeOverflowsToNearestChiplet) {
  const auto be = ChipletBackend::build(linked_spec(2, 2, 5, 5, 2));
  auto bins = BinState::init(be);
  const auto ref = place_partition(bins, 0, 5, 5, PlacementMode::Center);
  EXPECT_EQ(ref.chip, 0);
  const auto below = place_partition_relative(bins, 1, 5, 5, ref, Direction::Below);
  EXPECT_EQ(below.chip, 2);
  const auto right = place_partition_relative(bins, 2, 5, 5, ref, Direction::Right);
  EXPECT_EQ(right.chip, 1);
  const auto any = place_partition_relative(bins, 3, 5, 5, ref);
  EXPECT_EQ(any.chip, 3);
  EXPECT_COMPILE_ERROR(place_partition_relative(bins, 4, 1, 1, ref), ErrorKind::NoFit);
}

TEST(Placement, HintFallsBackWhenImpossible) {
  const auto be = ChipletBackend::build(grid_spec(1, 1, 6, 6));
  auto bins = BinState::init(be);
  const auto ref = place_partition(bins, 0, 3, 6, PlacementMode::SizeAware);
  const auto p = place_partition_relative(bins, 1, 3, 3, ref, Direction::Below);
  EXPECT_EQ(p.rect, (Rect{3, 1, 3, 3}));
}

TEST(Placement, NoFitWhenTooLarge) {
  const auto be = ChipletBackend::build(grid_spec(1, 2, 4, 4));
  auto bins = BinState::init(be);
  EXPECT_COMPILE_ERROR(place_partition(bins, 0, 5, 2, PlacementMode::Center), ErrorKind::NoFit);
  EXPECT_COMPILE_ERROR(place_partition(bins, 0, 0, 2, PlacementMode::Center), ErrorKind::Validation);
}

TEST(Placement, SmallPatchesShareAChiplet) {
  const auto be = ChipletBackend::build(linked_spec(2, 2, 6, 6, 2));
  auto bins = BinState::init(be);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(place_partition(bins, i, 3, 3, PlacementMode::SizeAware).chip, 0);
  EXPECT_EQ(bins.free_area(0), 0);
  EXPECT_EQ(place_partition(bins, 4, 3, 3, PlacementMode::SizeAware).chip, 1);
}

TEST(Placement, RandomPackingStaysSound) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto spec = grid_spec(2, 2, 4 + static_cast<int>(rng() % 6), 4 + static_cast<int>(rng() % 6));
    for (int i = 0; i < 3; ++i)
      spec.defects.push_back(PhysCoord{static_cast<int>(rng() % 4), static_cast<int>(rng() % static_cast<unsigned>(spec.chip_w)),
                                       static_cast<int>(rng() % static_cast<unsigned>(spec.chip_h))});
    std::sort(spec.defects.begin(), spec.defects.end());
    spec.defects.erase(std::unique(spec.defects.begin(), spec.defects.end()), spec.defects.end());
    const auto be = ChipletBackend::build(spec);
    auto bins = BinState::init(be);
    std::vector<Placement> placed;
    for (int id = 0; id < 12; ++id) {
      const int w = 1 + static_cast<int>(rng() % 4);
      const int h = 1 + static_cast<int>(rng() % 4);
      try {
        if (placed.empty() || rng() % 2 == 0) {
          placed.push_back(place_partition(bins, id, w, h, rng() % 2 ? PlacementMode::Center : PlacementMode::SizeAware));
        } else {
          const auto dir = static_cast<Direction>(rng() % 5);
          placed.push_back(place_partition_relative(bins, id, w, h, placed[rng() % placed.size()], dir));
        }
      } catch (const CompileError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoFit);
      }
      ASSERT_EQ(oracle::rasterize_check(bins, be), "") << "trial " << trial << " id " << id;
    }
  }
}

namespace {

GlobalMapResult map_ls_cnot(int d, const ChipletBackend& be, PlacementMode mode) {
  const auto c = gen_ls_cnot_circuit(d, 1, 1);
  const auto dag = c.dag();
  const auto reg = predefined_partitions(dag, *c.partitions, c.geometry);
  const auto pg = build_partition_graph(reg, dag);
  const auto order = sequence(pg);
  GlobalMapOptions opts;
  opts.mode = mode;
  opts.hints = c.hints;
  return global_map(be, order, enrich(reg, SigmaPayload{order.sigma}), pg, opts);
}

}  // namespace

TEST(GlobalMap, LsCnotFollowsHints) {
  const auto c = gen_ls_cnot_circuit(3, 1, 1);
  BackendGenOptions column;
  column.grid = std::pair{4, 1};
  const auto be = ChipletBackend::build(gen_backend_for(c, column));
  const auto res = map_ls_cnot(3, be, PlacementMode::Center);
  EXPECT_EQ(res.registry.stage(), Stage::QSigmaAlpha);
  EXPECT_EQ(res.placements.front().partition, 1);
  ASSERT_EQ(res.placements.size(), 3u);
  std::map<PartitionId, std::pair<int, int>> origin;
  for (const auto& p : res.placements) origin[p.partition] = res.bins.global_origin(p.chip, p.rect);
  // Ancilla strip below control, target below ancilla.
  EXPECT_GT(origin[1].second, origin[0].second);
  EXPECT_GT(origin[2].second, origin[1].second);
  EXPECT_EQ(oracle::rasterize_check(res.bins, be), "");
}

TEST(GlobalMap, Deterministic) {
  const auto c = gen_ls_cnot_circuit(5, 1, 1);
  const auto be = ChipletBackend::build(gen_backend_for(c, BackendGenOptions{}));
  for (auto mode : {PlacementMode::Center, PlacementMode::SizeAware}) {
    const auto a = map_ls_cnot(5, be, mode);
    const auto b = map_ls_cnot(5, be, mode);
    EXPECT_EQ(a.placements, b.placements);
  }
}

TEST(GlobalMap, EveryPartitionPlacedOnce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 20 + static_cast<int>(rng() % 30);
    const auto g = oracle::random_connected_graph(rng, n, 0.1, 3);
    std::vector<GateNode> gates;
    for (const auto& e : g.edges()) gates.push_back(testutil::cx(e.a, e.b));
    const auto dag = CircuitDag::build(gates, n);
    const int k = 4;
    const std::vector<int> caps(k, (n + k - 1) / k);
    const auto blocks = kway_partition(g, k, caps).block_of;
    const auto reg = registry_from_blocks(blocks, n);
    const auto pg = build_partition_graph(reg, dag);
    const auto be = ChipletBackend::build(linked_spec(2, 2, 5, 5, 2));
    GlobalMapOptions opts;
    opts.relative_ref = trial % 2 ? RelativeRef::Order : RelativeRef::Weight;
    const auto order = sequence(pg);
    const auto res = global_map(be, order, enrich(reg, SigmaPayload{order.sigma}), pg, opts);
    EXPECT_EQ(res.placements.size(), reg.size());
    for (const auto& p : res.placements) {
      const auto& part = res.registry.at(p.partition);
      ASSERT_TRUE(part.placement.has_value());
      EXPECT_EQ(p.rect.w, part.width);
      EXPECT_EQ(p.rect.h, part.height);
    }
    EXPECT_EQ(oracle::rasterize_check(res.bins, be), "");
  }
}
