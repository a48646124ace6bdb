#include "env.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "error.hpp"

namespace airs::env {

namespace {

using nlohmann::json;

double parse_double(const std::string& token, const std::string& where) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        raise(Errc::malformed_record, where + ": not a number: '" + token + "'");
    if (!std::isfinite(value)) raise(Errc::malformed_record, where + ": non-finite coordinate");
    return value;
}

PointCloud load_ply(std::istream& in, const std::string& path) {
    std::string line;
    size_t vertex_count = 0;
    bool ascii = false, header_done = false;
    std::vector<std::string> vertex_props;
    std::string element;

    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "ascii")
                raise(Errc::unsupported_format, path + ": only ascii PLY is supported");
            ascii = true;
        } else if (word == "element") {
            ss >> element;
            if (element == "vertex") ss >> vertex_count;
        } else if (word == "property" && element == "vertex") {
            std::string type, name;
            ss >> type >> name;
            vertex_props.push_back(name);
        } else if (word == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done || !ascii) raise(Errc::unsupported_format, path + ": truncated PLY header");

    int ix = -1, iy = -1, iz = -1;
    for (size_t i = 0; i < vertex_props.size(); ++i) {
        if (vertex_props[i] == "x") ix = static_cast<int>(i);
        if (vertex_props[i] == "y") iy = static_cast<int>(i);
        if (vertex_props[i] == "z") iz = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0)
        raise(Errc::unsupported_format, path + ": PLY vertex element lacks x/y/z properties");

    PointCloud cloud;
    cloud.points.reserve(vertex_count);
    for (size_t v = 0; v < vertex_count; ++v) {
        if (!std::getline(in, line))
            raise(Errc::malformed_record, path + ": vertex list shorter than declared");
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (tokens.size() < vertex_props.size())
            raise(Errc::malformed_record, path + ": short vertex record");
        const std::string where = path + " vertex " + std::to_string(v);
        cloud.points.push_back({parse_double(tokens[ix], where), parse_double(tokens[iy], where),
                                parse_double(tokens[iz], where)});
    }
    if (cloud.points.empty()) raise(Errc::empty_cloud, path + ": PLY has no vertices");
    return cloud;
}

PointCloud load_csv(std::istream& in, const std::string& path) {
    PointCloud cloud;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (tokens.size() != 3)
            raise(Errc::malformed_record,
                  path + ":" + std::to_string(line_no) + ": expected x,y,z");
        const std::string where = path + ":" + std::to_string(line_no);
        cloud.points.push_back({parse_double(tokens[0], where), parse_double(tokens[1], where),
                                parse_double(tokens[2], where)});
    }
    if (cloud.points.empty()) raise(Errc::empty_cloud, path + ": no points");
    return cloud;
}

}  // namespace

PointCloud load_point_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::file_not_found, "cannot open point cloud: " + path);

    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first == "ply") return load_ply(in, path);

    in.clear();
    in.seekg(0);
    return load_csv(in, path);
}

size_t OccupancyGrid::occupied_count() const {
    return static_cast<size_t>(std::count(cells.begin(), cells.end(), uint8_t{1}));
}

OccupancyGrid project_occupancy(const PointCloud& cloud, double resolution, double z_min,
                                double z_max, int min_hits, std::optional<GridExtent> extent) {
    if (resolution <= 0.0) raise(Errc::invalid_config, "resolution must be positive");
    if (z_min >= z_max) raise(Errc::invalid_config, "z band must satisfy z_min < z_max");
    if (cloud.points.empty()) raise(Errc::empty_cloud, "cannot project an empty cloud");

    OccupancyGrid grid;
    grid.resolution = resolution;
    if (extent) {
        grid.origin = extent->origin;
        grid.width = extent->width;
        grid.height = extent->height;
    } else {
        double min_x = cloud.points[0].x, max_x = min_x;
        double min_y = cloud.points[0].y, max_y = min_y;
        for (const geom::Vec3& p : cloud.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        grid.origin = {std::floor(min_x / resolution) * resolution,
                       std::floor(min_y / resolution) * resolution};
        grid.width = static_cast<int>(std::floor((max_x - grid.origin.x) / resolution)) + 1;
        grid.height = static_cast<int>(std::floor((max_y - grid.origin.y) / resolution)) + 1;
    }
    if (grid.width <= 0 || grid.height <= 0)
        raise(Errc::invalid_config, "grid extent must be positive");

    std::vector<int> hits(static_cast<size_t>(grid.width) * grid.height, 0);
    for (const geom::Vec3& p : cloud.points) {
        if (p.z < z_min || p.z > z_max) continue;
        const auto [col, row] = grid.cell_of(p.xy());
        if (!grid.in_bounds(col, row)) continue;  // only possible with an explicit extent
        ++hits[static_cast<size_t>(row) * grid.width + col];
    }

    grid.cells.resize(hits.size());
    for (size_t i = 0; i < hits.size(); ++i) grid.cells[i] = hits[i] >= min_hits ? 1 : 0;
    return grid;
}

void save_grid_pgm(const OccupancyGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write grid: " + path);
    out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    for (int row = grid.height - 1; row >= 0; --row) {
        for (int col = 0; col < grid.width; ++col)
            out.put(grid.occupied(col, row) ? static_cast<char>(255) : static_cast<char>(0));
    }
    if (!out) raise(Errc::io_failure, "write failed: " + path);

    json sidecar = {{"resolution", grid.resolution},
                    {"origin_x", grid.origin.x},
                    {"origin_y", grid.origin.y}};
    std::ofstream side(path + ".json", std::ios::binary);
    if (!side) raise(Errc::io_failure, "cannot write grid sidecar: " + path + ".json");
    side << sidecar.dump(2) << "\n";
}

OccupancyGrid load_grid_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::file_not_found, "cannot open grid: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") raise(Errc::unsupported_format, path + ": expected binary PGM (P5)");
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    in.get();  // single whitespace after maxval
    if (width <= 0 || height <= 0 || maxval != 255)
        raise(Errc::malformed_record, path + ": bad PGM dimensions");

    OccupancyGrid grid;
    grid.width = width;
    grid.height = height;
    grid.cells.assign(static_cast<size_t>(width) * height, 0);
    std::vector<char> raster(static_cast<size_t>(width) * height);
    in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (in.gcount() != static_cast<std::streamsize>(raster.size()))
        raise(Errc::malformed_record, path + ": truncated PGM raster");
    for (int row = 0; row < height; ++row) {
        const size_t file_row = static_cast<size_t>(height - 1 - row);
        for (int col = 0; col < width; ++col)
            grid.set(col, row, static_cast<uint8_t>(raster[file_row * width + col]) >= 128);
    }

    std::ifstream side(path + ".json");
    if (!side) raise(Errc::file_not_found, "missing grid sidecar: " + path + ".json");
    json meta = json::parse(side, nullptr, false);
    if (meta.is_discarded() || !meta.contains("resolution"))
        raise(Errc::malformed_record, path + ".json: expected {resolution, origin_x, origin_y}");
    grid.resolution = meta["resolution"].get<double>();
    grid.origin = {meta.value("origin_x", 0.0), meta.value("origin_y", 0.0)};
    if (grid.resolution <= 0.0) raise(Errc::malformed_record, path + ".json: resolution must be > 0");
    return grid;
}

void save_grid_json(const OccupancyGrid& grid, const std::string& path) {
    json rows = json::array();
    for (int row = 0; row < grid.height; ++row) {
        std::string bits(static_cast<size_t>(grid.width), '0');
        for (int col = 0; col < grid.width; ++col)
            if (grid.occupied(col, row)) bits[static_cast<size_t>(col)] = '1';
        rows.push_back(bits);
    }
    json doc = {{"width", grid.width},
                {"height", grid.height},
                {"resolution", grid.resolution},
                {"origin", {grid.origin.x, grid.origin.y}},
                {"rows", rows}};
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write grid: " + path);
    out << doc.dump(2) << "\n";
}

OccupancyGrid load_grid_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open grid: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("rows"))
        raise(Errc::malformed_record, path + ": expected a grid JSON document");

    OccupancyGrid grid;
    grid.width = doc["width"].get<int>();
    grid.height = doc["height"].get<int>();
    grid.resolution = doc["resolution"].get<double>();
    grid.origin = {doc["origin"][0].get<double>(), doc["origin"][1].get<double>()};
    if (grid.width <= 0 || grid.height <= 0 || grid.resolution <= 0.0)
        raise(Errc::malformed_record, path + ": bad grid dimensions");
    const auto& rows = doc["rows"];
    if (static_cast<int>(rows.size()) != grid.height)
        raise(Errc::malformed_record, path + ": row count mismatch");
    grid.cells.assign(static_cast<size_t>(grid.width) * grid.height, 0);
    for (int row = 0; row < grid.height; ++row) {
        const std::string bits = rows[static_cast<size_t>(row)].get<std::string>();
        if (static_cast<int>(bits.size()) != grid.width)
            raise(Errc::malformed_record, path + ": row width mismatch");
        for (int col = 0; col < grid.width; ++col)
            grid.set(col, row, bits[static_cast<size_t>(col)] == '1');
    }
    return grid;
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void save_grid(const OccupancyGrid& grid, const std::string& path) {
    if (has_suffix(path, ".pgm")) return save_grid_pgm(grid, path);
    save_grid_json(grid, path);
}

OccupancyGrid load_grid(const std::string& path) {
    if (has_suffix(path, ".pgm")) return load_grid_pgm(path);
    return load_grid_json(path);
}

SemanticLabelMap load_label_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open label map: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("labels"))
        raise(Errc::malformed_record, path + ": expected {labels: [...]}");

    SemanticLabelMap map;
    for (const json& entry : doc["labels"]) {
        SemanticRegion region;
        region.col_min = entry["cell_min"][0].get<int>();
        region.row_min = entry["cell_min"][1].get<int>();
        region.col_max = entry["cell_max"][0].get<int>();
        region.row_max = entry["cell_max"][1].get<int>();
        region.label = entry["label"].get<std::string>();
        if (region.col_min > region.col_max || region.row_min > region.row_max)
            raise(Errc::malformed_record, path + ": inverted region bounds for " + region.label);
        map.regions.push_back(std::move(region));
    }
    return map;
}

void validate_label_map(const SemanticLabelMap& map, const OccupancyGrid& grid) {
    for (const SemanticRegion& r : map.regions) {
        if (!grid.in_bounds(r.col_min, r.row_min) || !grid.in_bounds(r.col_max, r.row_max))
            raise(Errc::malformed_record, "label region outside grid: " + r.label);
    }
}

}  // namespace airs::env
