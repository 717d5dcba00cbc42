#include "ks/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ks {

namespace {
const char kMagic[6] = {'K', 'S', 'F', 'L', 'D', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    put_u64(os, v);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
}
}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, double time) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    os.write(kMagic, sizeof(kMagic));
    put_u64(os, static_cast<std::uint64_t>(f.grid.dim));
    put_u64(os, static_cast<std::uint64_t>(f.grid.points_per_axis));
    put_f64(os, f.grid.box_length);
    put_f64(os, time);
    for (double x : f.values) put_f64(os, x);
    if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open snapshot file: " + path);
    char magic[6];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a field snapshot: " + path);
    const auto dim = static_cast<int>(get_u64(is));
    const auto points = static_cast<int>(get_u64(is));
    const double length = get_f64(is);
    const double time = get_f64(is);
    Grid g(dim, points, length);
    std::vector<double> values(g.total_points());
    for (double& x : values) x = get_f64(is);
    if (!is) throw std::runtime_error("truncated snapshot: " + path);
    return Snapshot{ScalarField(g, std::move(values)), time};
}

}  // namespace ks
