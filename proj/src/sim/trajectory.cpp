#include "mdcrow/sim/trajectory.hpp"

#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mdcrow::sim {

static_assert(std::endian::native == std::endian::little, "trajectory I/O assumes little-endian");

namespace {

constexpr char kMagic[8] = {'M', 'D', 'C', 'T', 'R', 'J', '0', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IntegrityError("truncated trajectory file: " + path);
    return v;
}

} // namespace

void write_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PersistenceError("cannot write trajectory: " + path);
    const std::string topo = chem::write_pdb(traj.topology);
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, traj.n_atoms());
    put<std::uint64_t>(out, traj.n_frames());
    put<double>(out, traj.frame_interval_ps);
    put<std::uint8_t>(out, traj.periodic ? 1 : 0);
    put<std::uint64_t>(out, topo.size());
    out.write(topo.data(), static_cast<std::streamsize>(topo.size()));
    for (size_t f = 0; f < traj.n_frames(); ++f) {
        put<double>(out, traj.times[f]);
        if (traj.periodic)
            for (int k = 0; k < 3; ++k) put<double>(out, traj.boxes[f](k));
        out.write(reinterpret_cast<const char*>(traj.frames[f].data()),
                  static_cast<std::streamsize>(sizeof(double) * 3 * traj.n_atoms()));
    }
    if (!out) throw PersistenceError("trajectory write failed: " + path);
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open trajectory: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IntegrityError("not a trajectory container: " + path);
    const auto version = take<std::uint32_t>(in, path);
    if (version != kVersion) throw IntegrityError("unsupported trajectory version in " + path);
    Trajectory traj;
    const auto n = take<std::uint64_t>(in, path);
    const auto f = take<std::uint64_t>(in, path);
    traj.frame_interval_ps = take<double>(in, path);
    traj.periodic = take<std::uint8_t>(in, path) == 1;
    const auto len = take<std::uint64_t>(in, path);
    std::string topo(len, '\0');
    in.read(topo.data(), static_cast<std::streamsize>(len));
    if (!in) throw IntegrityError("truncated trajectory topology: " + path);
    traj.topology = chem::parse_pdb(topo);
    if (traj.topology.atoms.size() != n)
        throw IntegrityError("trajectory topology atom count mismatch in " + path);
    for (std::uint64_t i = 0; i < f; ++i) {
        traj.times.push_back(take<double>(in, path));
        if (traj.periodic) {
            Eigen::Vector3d box;
            for (int k = 0; k < 3; ++k) box(k) = take<double>(in, path);
            traj.boxes.push_back(box);
        }
        Eigen::Matrix3Xd xyz(3, static_cast<Eigen::Index>(n));
        in.read(reinterpret_cast<char*>(xyz.data()), static_cast<std::streamsize>(sizeof(double) * 3 * n));
        if (!in) throw IntegrityError("truncated trajectory frame " + std::to_string(i) + " in " + path);
        traj.frames.push_back(std::move(xyz));
    }
    return traj;
}

std::string state_log_csv(const std::vector<StateRecord>& log) {
    std::string out = "step,time_ps,PE,KE,T,V\n";
    char buf[256];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f,%.4f,%.4f\n", r.step, r.time_ps, r.potential,
                      r.kinetic, r.temperature, r.volume);
        out += buf;
    }
    return out;
}

std::vector<StateRecord> parse_state_log_csv(const std::string& text) {
    std::vector<StateRecord> log;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 6) throw ParseError("state log row has " + std::to_string(f.size()) + " fields");
        log.push_back({parse_int(f[0], "step"), parse_double(f[1], "time"), parse_double(f[2], "PE"),
                       parse_double(f[3], "KE"), parse_double(f[4], "T"), parse_double(f[5], "V")});
    }
    return log;
}

} // namespace mdcrow::sim
