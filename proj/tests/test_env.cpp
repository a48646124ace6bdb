#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "env.hpp"
#include "error.hpp"
#include "oracles.hpp"

using airs::Errc;
using airs::Error;
using airs::geom::Vec2;
namespace env = airs::env;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an airs::Error");
    return Errc::usage;
}

}  // namespace

TEST_CASE("ascii PLY clouds parse") {
    const auto path = temp_file("cloud.ply");
    std::ofstream(path) << "ply\nformat ascii 1.0\nelement vertex 3\n"
                           "property float x\nproperty float y\nproperty float z\n"
                           "end_header\n0 0 0\n1 0.5 2\n-1 2 0.25\n";
    const env::PointCloud cloud = env::load_point_cloud(path.string());
    REQUIRE(cloud.points.size() == 3);
    CHECK(cloud.points[1].z == doctest::Approx(2.0));
}

TEST_CASE("PLY with no vertices is an empty cloud") {
    const auto path = temp_file("cloud_empty.ply");
    std::ofstream(path) << "ply\nformat ascii 1.0\nelement vertex 0\n"
                           "property float x\nproperty float y\nproperty float z\nend_header\n";
    CHECK(code_of([&] { env::load_point_cloud(path.string()); }) == Errc::empty_cloud);
}

TEST_CASE("binary PLY is unsupported") {
    const auto path = temp_file("cloud_binary.ply");
    std::ofstream(path) << "ply\nformat binary_little_endian 1.0\nelement vertex 1\nend_header\n";
    CHECK(code_of([&] { env::load_point_cloud(path.string()); }) == Errc::unsupported_format);
}

TEST_CASE("CSV clouds parse and reject non-numeric fields") {
    const auto ok = temp_file("cloud.csv");
    std::ofstream(ok) << "# comment\n0.5,0.5,1.0\n1.5, 0.5, 1.0\n";
    CHECK(env::load_point_cloud(ok.string()).points.size() == 2);

    const auto bad = temp_file("cloud_bad.csv");
    std::ofstream(bad) << "0.5,oops,1.0\n";
    CHECK(code_of([&] { env::load_point_cloud(bad.string()); }) == Errc::malformed_record);
}

TEST_CASE("projection puts a point into the expected cell") {
    env::PointCloud cloud{{{1.0, 0.3, 1.0}}};
    const env::OccupancyGrid grid = env::project_occupancy(
        cloud, 0.5, 0.1, 2.0, 1, env::GridExtent{{0.0, 0.0}, 4, 2});
    CHECK(grid.occupied(2, 0));
    CHECK(grid.occupied_count() == 1);
}

TEST_CASE("points outside the z band are ignored") {
    env::PointCloud cloud{{{1.0, 0.3, 0.05}}};
    const env::OccupancyGrid grid = env::project_occupancy(
        cloud, 0.5, 0.1, 2.0, 1, env::GridExtent{{0.0, 0.0}, 4, 2});
    CHECK(grid.occupied_count() == 0);
}

TEST_CASE("projection of an empty cloud fails") {
    env::PointCloud cloud;
    CHECK(code_of([&] { env::project_occupancy(cloud, 0.5, 0.1, 2.0, 1); }) == Errc::empty_cloud);
}

TEST_CASE("projection matches brute-force binning on random clouds") {
    std::mt19937 rng(9);
    env::PointCloud cloud;
    for (int i = 0; i < 1000; ++i)
        cloud.points.push_back({rng() % 1000 / 125.0, rng() % 1000 / 125.0, rng() % 300 / 100.0});
    const env::OccupancyGrid grid = env::project_occupancy(cloud, 0.25, 0.1, 2.0, 3);
    const env::OccupancyGrid expected = oracle::project_by_counting(
        cloud, 0.25, 0.1, 2.0, 3, grid.origin, grid.width, grid.height);
    CHECK(grid.cells == expected.cells);
    CHECK(grid.origin.x == doctest::Approx(0.0));

    // auto extent covers every point
    for (const auto& p : cloud.points) {
        const auto [c, r] = grid.cell_of(p.xy());
        CHECK(grid.in_bounds(c, r));
    }
}

TEST_CASE("widening the z band never frees cells") {
    std::mt19937 rng(13);
    env::PointCloud cloud;
    for (int i = 0; i < 500; ++i)
        cloud.points.push_back({rng() % 100 / 20.0, rng() % 100 / 20.0, rng() % 250 / 100.0});
    const env::GridExtent extent{{0.0, 0.0}, 10, 10};
    size_t prev = 0;
    for (double top = 0.5; top <= 2.5; top += 0.5) {
        const env::OccupancyGrid grid =
            env::project_occupancy(cloud, 0.5, 0.1, top, 2, extent);
        CHECK(grid.occupied_count() >= prev);
        prev = grid.occupied_count();
    }
}

TEST_CASE("shifting the cloud by whole cells shifts the pattern") {
    std::mt19937 rng(29);
    env::PointCloud cloud;
    for (int i = 0; i < 400; ++i)
        cloud.points.push_back({1.0 + rng() % 100 / 50.0, 1.0 + rng() % 100 / 50.0, 1.0});
    const env::GridExtent extent{{0.0, 0.0}, 40, 40};
    const env::OccupancyGrid base = env::project_occupancy(cloud, 0.25, 0.1, 2.0, 2, extent);

    env::PointCloud shifted = cloud;
    for (auto& p : shifted.points) p.x += 3 * 0.25;
    const env::OccupancyGrid moved = env::project_occupancy(shifted, 0.25, 0.1, 2.0, 2, extent);
    for (int row = 0; row < 40; ++row)
        for (int col = 0; col < 37; ++col)
            CHECK(moved.occupied(col + 3, row) == base.occupied(col, row));
}

TEST_CASE("grid PGM round trip preserves cells and georeference") {
    std::mt19937 rng(3);
    env::OccupancyGrid grid;
    grid.width = 23;
    grid.height = 17;
    grid.resolution = 0.05;
    grid.origin = {1.25, -0.5};
    grid.cells.resize(23 * 17);
    for (auto& c : grid.cells) c = rng() % 3 == 0 ? 1 : 0;

    const auto path = temp_file("grid.pgm");
    env::save_grid(grid, path.string());
    const env::OccupancyGrid back = env::load_grid(path.string());
    CHECK(back.width == grid.width);
    CHECK(back.height == grid.height);
    CHECK(back.resolution == grid.resolution);
    CHECK(back.origin == grid.origin);
    CHECK(back.cells == grid.cells);
}

TEST_CASE("grid JSON round trip preserves cells") {
    std::mt19937 rng(4);
    env::OccupancyGrid grid;
    grid.width = 9;
    grid.height = 12;
    grid.resolution = 0.1;
    grid.origin = {0.0, 0.3};
    grid.cells.resize(9 * 12);
    for (auto& c : grid.cells) c = rng() % 2;

    const auto path = temp_file("grid.json");
    env::save_grid(grid, path.string());
    const env::OccupancyGrid back = env::load_grid(path.string());
    CHECK(back.cells == grid.cells);
    CHECK(back.origin == grid.origin);
}

TEST_CASE("label maps load and validate against grids") {
    const auto path = temp_file("labels.json");
    std::ofstream(path) << R"({"labels":[{"cell_min":[1,1],"cell_max":[3,2],"label":"sofa"}]})";
    const env::SemanticLabelMap map = env::load_label_map(path.string());
    REQUIRE(map.regions.size() == 1);
    CHECK(map.regions[0].label == "sofa");

    env::OccupancyGrid grid;
    grid.width = 4;
    grid.height = 4;
    grid.resolution = 1.0;
    grid.cells.assign(16, 0);
    env::validate_label_map(map, grid);  // fits

    env::OccupancyGrid small = grid;
    small.width = 2;
    small.height = 2;
    small.cells.assign(4, 0);
    CHECK_THROWS_AS(env::validate_label_map(map, small), Error);
}
