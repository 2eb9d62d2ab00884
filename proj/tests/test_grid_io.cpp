#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mirrorflow/io.hpp"
#include "test_util.hpp"

using namespace mirrorflow;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "mirrorflow_grid_io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("grid factories enforce the layout invariants") {
    CHECK_NOTHROW(GridSpec::periodic_cube(4, 8, 32));
    CHECK_THROWS_AS(GridSpec::periodic_cube(3, 8, 8), GeometryError);
    CHECK_THROWS_AS(GridSpec::periodic_cube(8, 7, 8), GeometryError);

    CHECK_NOTHROW(GridSpec::half_cube(8, 8, 17));
    CHECK_THROWS_AS(GridSpec::half_cube(8, 8, 16), GeometryError); // even n3
    CHECK_THROWS_AS(GridSpec::half_cube(8, 8, 3), GeometryError);

    CHECK_NOTHROW(GridSpec::symmetric_slab(8, 8, 33));
    CHECK_THROWS_AS(GridSpec::symmetric_slab(8, 8, 32), GeometryError);
    CHECK_THROWS_AS(GridSpec::slab(8, 8, 9, 0.1, 0.5), AlignmentError); // no x3=0 plane
}

TEST_CASE("half cube embeds into the cube with n3 = 2*(n3h-1)") {
    const GridSpec half = GridSpec::half_cube(8, 8, 17);
    const GridSpec cube = half.embedding_cube();
    CHECK(cube.n3() == 32);
    CHECK(cube.dx(2) == doctest::Approx(half.dx(2)).epsilon(1e-15));
    // the faces land on cube planes
    CHECK(cube.plane_index(-0.5) == 8);
    CHECK(cube.plane_index(0.5) == 24);
    CHECK(half.plane_index(-0.5) == 0);
    CHECK(half.plane_index(0.5) == 16);
}

TEST_CASE("plane_index rejects off-grid planes") {
    const GridSpec cube = GridSpec::periodic_cube(16, 16, 16);
    CHECK(cube.plane_index(0.0) == 8);
    CHECK_THROWS_AS(cube.plane_index(0.3), AlignmentError);
}

TEST_CASE("mfld round trip is bit exact for every geometry") {
    const auto cases = {
        mftest::random_band_limited(GridSpec::periodic_cube(8, 6, 4), 1, 11),
        VectorField::from_function(GridSpec::half_cube(6, 4, 5),
                                   [](double x, double y, double z) {
                                       return std::array<double, 3>{x + y, z, x * z};
                                   }),
        VectorField::from_function(GridSpec::symmetric_slab(4, 6, 9),
                                   [](double x, double, double z) {
                                       return std::array<double, 3>{z, x, z * z};
                                   }),
    };
    int idx = 0;
    for (const auto& f : cases) {
        const auto path = temp_file(("roundtrip" + std::to_string(idx++) + ".mfld").c_str());
        write_mfld(path, f);
        const VectorField g = read_mfld(path);
        CHECK(g.grid() == f.grid());
        CHECK(max_abs_diff(f, g) == 0.0);
    }
}

TEST_CASE("mfld header layout is pinned") {
    const GridSpec g = GridSpec::half_cube(6, 4, 5);
    VectorField f(g);
    const auto path = temp_file("header.mfld");
    write_mfld(path, f);

    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "MFLD");
    std::uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    CHECK(version == 1);
    std::uint8_t tag = 0;
    is.read(reinterpret_cast<char*>(&tag), 1);
    CHECK(tag == 1);
    std::uint32_t n[3];
    is.read(reinterpret_cast<char*>(n), 12);
    CHECK(n[0] == 6);
    CHECK(n[1] == 4);
    CHECK(n[2] == 5);
    CHECK(fs::file_size(path) == 4 + 4 + 1 + 12 + 3 * g.size() * sizeof(double));
}

TEST_CASE("mfld rejects malformed files") {
    const GridSpec g = GridSpec::half_cube(6, 4, 5);
    VectorField f(g);
    const auto path = temp_file("bad.mfld");
    write_mfld(path, f);

    SUBCASE("truncated data") {
        fs::resize_file(path, fs::file_size(path) - 16);
        CHECK_THROWS_AS(read_mfld(path), FormatError);
    }
    SUBCASE("bad magic") {
        std::fstream s(path, std::ios::in | std::ios::out | std::ios::binary);
        s.write("XXXX", 4);
        s.close();
        CHECK_THROWS_AS(read_mfld(path), FormatError);
    }
    SUBCASE("trailing bytes") {
        std::ofstream s(path, std::ios::app | std::ios::binary);
        s.write("junk", 4);
        s.close();
        CHECK_THROWS_AS(read_mfld(path), FormatError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_mfld(temp_file("nope.mfld")), FormatError);
    }
}

TEST_CASE("mfld rejects non-finite samples and non-canonical slabs") {
    const GridSpec g = GridSpec::half_cube(6, 4, 5);
    VectorField f(g);
    f.at(1, 0, 0, 0) = std::nan("");
    const auto path = temp_file("nan.mfld");
    write_mfld(path, f);
    CHECK_THROWS_AS(read_mfld(path), FormatError);

    const GridSpec odd_slab = GridSpec::slab(4, 4, 5, 0.0, 0.5);
    CHECK_THROWS_AS(write_mfld(temp_file("slab.mfld"), VectorField(odd_slab)), FormatError);
}

TEST_CASE("field arithmetic and finiteness helpers") {
    const GridSpec g = GridSpec::periodic_cube(4, 4, 4);
    const VectorField a = mftest::random_band_limited(g, 1, 3);
    const VectorField b = mftest::random_band_limited(g, 1, 4);
    const VectorField s = a + b - b;
    CHECK(mftest::rel_linf(s, a) < 1e-14);
    CHECK(a.all_finite());
    VectorField c = a;
    c.at(0, 1, 2, 3) = std::numeric_limits<double>::infinity();
    CHECK(!c.all_finite());
}
