#include "field_io.hpp"

#include <fstream>

#include <json.hpp>

#include "errors.hpp"

namespace renskog {

namespace {

using nlohmann::json;

json grid_to_json(const GridSpec& g) {
    return json{{"x_max", g.x_max}, {"p_max", g.p_max}, {"n_x", g.n_x},   {"n_p", g.n_p},
                {"n_omega", g.n_omega}, {"t_max", g.t_max}, {"n_t", g.n_t}};
}

GridSpec grid_from_json(const json& j) {
    GridSpec g;
    g.x_max = j.at("x_max").get<double>();
    g.p_max = j.at("p_max").get<double>();
    g.n_x = j.at("n_x").get<int>();
    g.n_p = j.at("n_p").get<int>();
    g.n_omega = j.at("n_omega").get<int>();
    g.t_max = j.at("t_max").get<double>();
    g.n_t = j.at("n_t").get<int>();
    g.validate();
    return g;
}

void write_header(const std::string& path, const GridSpec& grid, int slices) {
    json j{{"format", "renskog-lattice"},
           {"version", 1},
           {"dtype", "float64-le"},
           {"order", "x-major-then-p"},
           {"slices", slices},
           {"grid", grid_to_json(grid)}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot open header for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing header: " + path);
}

std::pair<GridSpec, int> read_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open header: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed header " + path + ": " + e.what());
    }
    if (j.value("format", "") != "renskog-lattice") throw IoError("unexpected header format in " + path);
    return {grid_from_json(j.at("grid")), j.at("slices").get<int>()};
}

void write_bin(const std::string& path, const double* data, size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open binary for writing: " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    if (!out) throw IoError("failed writing binary: " + path);
}

void read_bin(const std::string& path, double* data, size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open binary: " + path);
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
        throw IoError("binary payload shorter than the header declares: " + path);
    char extra;
    if (in.read(&extra, 1)) throw IoError("binary payload longer than the header declares: " + path);
}

} // namespace

void save_field(const FieldLattice& field, const std::string& header_path, const std::string& bin_path) {
    write_header(header_path, field.spec(), 1);
    write_bin(bin_path, field.values().data(), field.values().size());
}

FieldLattice load_field(const std::string& header_path, const std::string& bin_path) {
    auto [grid, slices] = read_header(header_path);
    if (slices != 1) throw IoError("expected a single-slice file: " + header_path);
    FieldLattice field(grid);
    read_bin(bin_path, field.values().data(), field.values().size());
    return field;
}

void save_trajectory(const Trajectory& traj, const std::string& header_path, const std::string& bin_path) {
    if (traj.slices.size() != static_cast<size_t>(traj.spec.n_t))
        throw InvalidInput("trajectory slice count does not match grid.n_t");
    write_header(header_path, traj.spec, traj.spec.n_t);
    std::vector<double> all;
    all.reserve(traj.slices.size() * traj.spec.node_count());
    for (const auto& s : traj.slices) all.insert(all.end(), s.values().begin(), s.values().end());
    write_bin(bin_path, all.data(), all.size());
}

Trajectory load_trajectory(const std::string& header_path, const std::string& bin_path) {
    auto [grid, slices] = read_header(header_path);
    if (slices != grid.n_t) throw IoError("slice count does not match grid.n_t in " + header_path);
    std::vector<double> all(static_cast<size_t>(slices) * grid.node_count());
    read_bin(bin_path, all.data(), all.size());
    Trajectory traj;
    traj.spec = grid;
    traj.slices.reserve(slices);
    for (int k = 0; k < slices; ++k) {
        FieldLattice f(grid);
        std::copy_n(all.begin() + static_cast<size_t>(k) * grid.node_count(), grid.node_count(),
                    f.values().begin());
        traj.slices.push_back(std::move(f));
    }
    return traj;
}

} // namespace renskog
