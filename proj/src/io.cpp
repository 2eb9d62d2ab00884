#include "mirrorflow/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mirrorflow/compatibility.hpp"
#include "mirrorflow/pipeline.hpp"
#include "mirrorflow/reflection.hpp"
#include "mirrorflow/solver.hpp"

static_assert(std::endian::native == std::endian::little,
              "MFLD I/O assumes a little-endian host");

namespace mirrorflow {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void write_mfld(const std::filesystem::path& path, const VectorField& f) {
    const GridSpec& g = f.grid();
    if (g.geometry() == Geometry::Slab && (g.x3_min() != -0.5 || g.x3_max() != 0.5))
        throw FormatError("MFLD serializes only the canonical symmetric slab [-1/2,1/2]");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    const std::uint8_t tag = static_cast<std::uint8_t>(g.geometry());
    os.write(reinterpret_cast<const char*>(&tag), 1);
    put_u32(os, static_cast<std::uint32_t>(g.n1()));
    put_u32(os, static_cast<std::uint32_t>(g.n2()));
    put_u32(os, static_cast<std::uint32_t>(g.n3()));
    for (int c = 0; c < 3; ++c)
        os.write(reinterpret_cast<const char*>(f.component(c).data()),
                 static_cast<std::streamsize>(g.size() * sizeof(double)));
    if (!os) throw FormatError("short write to " + path.string());
}

VectorField read_mfld(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError(path.string() + ": bad magic");
    const std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
    std::uint8_t tag = 0xff;
    is.read(reinterpret_cast<char*>(&tag), 1);
    const std::uint32_t n1 = get_u32(is), n2 = get_u32(is), n3 = get_u32(is);
    if (!is) throw FormatError(path.string() + ": truncated header");

    GridSpec grid = [&] {
        try {
            switch (tag) {
                case 0: return GridSpec::periodic_cube(n1, n2, n3);
                case 1: return GridSpec::half_cube(n1, n2, n3);
                case 2: return GridSpec::symmetric_slab(n1, n2, n3);
                default: throw FormatError(path.string() + ": unknown geometry tag");
            }
        } catch (const GeometryError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }();

    VectorField f(grid);
    for (int c = 0; c < 3; ++c) {
        is.read(reinterpret_cast<char*>(f.component(c).data()),
                static_cast<std::streamsize>(grid.size() * sizeof(double)));
        if (!is) throw FormatError(path.string() + ": truncated data");
    }
    is.peek();
    if (!is.eof()) throw FormatError(path.string() + ": trailing bytes");
    if (!f.all_finite()) throw FormatError(path.string() + ": non-finite samples");
    return f;
}

template <typename Report>
void write_csv(const std::filesystem::path& path, const Report& report) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    report.to_csv(os);
    if (!os) throw FormatError("short write to " + path.string());
}

template void write_csv<CompatReport>(const std::filesystem::path&, const CompatReport&);
template void write_csv<FitReport>(const std::filesystem::path&, const FitReport&);
template void write_csv<SweepResult>(const std::filesystem::path&, const SweepResult&);

} // namespace mirrorflow
