#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "proxops/checkpoint.hpp"
#include "proxops/rng.hpp"

using namespace proxops;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("proxops_ckpt_" + name);
}

MlpParams sample_params(HeadKind head) {
    NetShape shape;
    shape.head = head;
    shape.obs_dim = 8;
    shape.choices = head == HeadKind::Categorical ? 7 : 0;
    shape.hidden1 = 16;
    shape.hidden2 = 16;
    return MlpParams::initialize(shape, 42, 0.1);
}

}  // namespace

TEST_CASE("checkpoints round-trip bit-exactly") {
    for (HeadKind head : {HeadKind::Categorical, HeadKind::Gaussian}) {
        const MlpParams params = sample_params(head);
        const fs::path path = temp_file(head == HeadKind::Categorical ? "cat.bin" : "gauss.bin");
        save_checkpoint(params, path);
        const MlpParams loaded = load_checkpoint(path);
        CHECK(loaded.shape == params.shape);
        CHECK(loaded.flat == params.flat);
        fs::remove(path);
    }
}

TEST_CASE("a missing checkpoint names the file and magic") {
    const fs::path path = temp_file("missing.bin");
    fs::remove(path);
    try {
        load_checkpoint(path);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find(path.string()) != std::string::npos);
        CHECK(what.find("PXNNPOL1") != std::string::npos);
    }
}

TEST_CASE("corruption is caught by the checksum") {
    const MlpParams params = sample_params(HeadKind::Categorical);
    const fs::path path = temp_file("corrupt.bin");
    save_checkpoint(params, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        char byte = 0x5a;
        f.write(&byte, 1);
    }
    CHECK_THROWS_WITH_AS(load_checkpoint(path), doctest::Contains("checksum"),
                         std::runtime_error);
    fs::remove(path);
}

TEST_CASE("bad magic and truncation are rejected") {
    const fs::path path = temp_file("bad_magic.bin");
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "NOTAPOLY-file-of-garbage-bytes-qqqqqqqqqqqqqqqq";
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "PX";
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
    fs::remove(path);
}
