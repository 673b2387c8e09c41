#include "doctest.h"

#include "../tools/commands.hpp"
#include "../tools/run_config.hpp"

#include "dmlab/errors.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dmlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DMLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Run r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dmlab-cli-test-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string cache() const { return " --cache-dir " + (path / "cache").string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config documents") {
    const auto c = cli::config_from_json(Json::parse(R"({"T": [1000, 10000], "alpha": ["3/2"], "k_max": 3})"));
    CHECK(c.T == std::vector<double>{1000, 10000});
    CHECK(c.alpha == std::vector<std::string>{"3/2"});
    CHECK(c.k_max == 3);
    CHECK_THROWS_AS(cli::config_from_json(Json::parse(R"({"kmax": 3})")), ValidationError);

    const auto echoed = cli::config_to_json(c);
    CHECK_FALSE(echoed.contains("threads"));
    CHECK(cli::config_from_json(echoed).k_max == 3);
}

TEST_CASE("command defaults and ranges") {
    const auto m = cli::resolve({}, "moments");
    CHECK(m.k_max == 4);
    CHECK(m.alpha == std::vector<std::string>{"1", "2"});
    cli::RunConfig c;
    c.k_max = 65;
    CHECK_THROWS_AS(cli::resolve(c, "moments"), ValidationError);
    c = {};
    c.T = {50};
    CHECK_THROWS_AS(cli::resolve(c, "verify"), ValidationError);
    c = {};
    c.tail_eps = 1e-3;
    CHECK_THROWS_AS(cli::resolve(c, "verify"), ValidationError);
    CHECK_THROWS(cli::resolve({}, "nonsense"));
}

TEST_CASE("moments report carries the constants") {
    TempDir dir;
    const auto r = run("moments" + dir.cache());
    CHECK(r.code == 0);
    for (const char* needle : {",2/3,", ",11/30,", ",52/315,", ",281/4536,", ",61/480,",
                               "pseudo_moment,lambda2,1,2,closed_form,-11/30", "# config:", "# anchor:"})
        CHECK_MESSAGE(r.out.find(needle) != std::string::npos, needle);
    std::istringstream lines(r.out);
    std::string line;
    int zero_rows = 0;
    while (std::getline(lines, line))
        if (line.find(",0,closed_form,1,1,") != std::string::npos) ++zero_rows;
    CHECK(zero_rows == 8);
}

TEST_CASE("reports are byte-identical across thread budgets") {
    TempDir dir;
    for (std::string cmd : {"moments", "bounds", "rv --samples 100000", "verify --T 1000"}) {
        const auto one = run(cmd + " --threads 1" + dir.cache());
        const auto four = run(cmd + " --threads 4" + dir.cache());
        CHECK(one.code == 0);
        CHECK_MESSAGE(one.out == four.out, cmd);
    }
}

TEST_CASE("flags override the config file") {
    TempDir dir;
    const auto cfg = dir.path / "run.json";
    std::ofstream(cfg) << R"({
  // comments are allowed
  "alpha": ["3/2"],
  "k_max": 3
})";
    const auto r = run("moments --config " + cfg.string() + " --k 2" + dir.cache());
    CHECK(r.code == 0);
    CHECK(r.out.find(R"("alpha":["3/2"],"k_max":2)") != std::string::npos);
    CHECK(r.out.find("pseudo_moment,lambda,3/2,2,") != std::string::npos);
    CHECK(r.out.find("pseudo_moment,lambda,3/2,3,") == std::string::npos);
}

TEST_CASE("json output") {
    TempDir dir;
    const auto out = dir.path / "b.json";
    CHECK(run("bounds --format json -o " + out.string() + dir.cache()).code == 0);
    const auto doc = Json::parse(slurp(out));
    CHECK(doc["command"] == "bounds");
    CHECK(doc["config"].is_object());
    CHECK(doc["results"].is_array());
    CHECK(doc["results"].size() > 10);
    CHECK(doc["anchors"].is_array());
}

TEST_CASE("table cache states") {
    TempDir dir;
    CHECK(run("tables --T 10000" + dir.cache()).out.find("cache miss") != std::string::npos);
    CHECK(run("tables --T 10000" + dir.cache()).out.find("cache hit") != std::string::npos);
    for (const auto& e : fs::directory_iterator(dir.path / "cache")) {
        std::fstream f(e.path(), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(200);
        f.put('\x01');
    }
    CHECK(run("tables --T 10000" + dir.cache()).out.find("rebuilt") != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run("moments --k 65" + dir.cache()).code == 2);
    CHECK(run("moments --no-such-flag" + dir.cache()).code == 2);
    CHECK(run("moments --alpha x/y" + dir.cache()).code == 2);
    CHECK(run("verify --T 1000 --k 2 --grid-k 1" + dir.cache()).code == 2);
    CHECK(run("zeros --zeros-file /nonexistent" + dir.cache()).code != 0);
    CHECK(run("tables --limit 2000000000" + dir.cache()).code == 3);
    // at T = 200 the off-diagonal terms are not negligible yet
    CHECK(run("verify --T 200" + dir.cache()).code == 4);
    CHECK(run("verify --T 1000" + dir.cache()).code == 0);
}
