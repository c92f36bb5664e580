#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sdbf::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("sdbf_cli_test_" + name);
    std::ofstream(p) << content;
    return p;
}

const std::vector<std::string> kTTest{"--theta-hat", "-0.17", "--se", "0.19", "--prior", "student_t:0.35:0.102:3",
                                      "--lower", "0"};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("bf reports the t-test example") {
    const auto r = run(cat({"bf", "--format", "json"}, kTTest));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"method", "log_bf10", "bf10", "bf01", "numerical_error", "inputs"}) CHECK(j.contains(key));
    CHECK(j["bf10"].get<double>() == doctest::Approx(0.0858595744).epsilon(1e-8));
    CHECK(j["inputs"]["prior"]["family"] == "student_t");

    const auto csv = run(cat({"bf", "--format", "csv", "--method", "savage_dickey,savage_dickey_ratio"}, kTTest));
    REQUIRE(csv.code == 0);
    const auto ls = lines(csv.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "method,log_bf10,bf10,bf01,numerical_error");

    const auto text = run(cat({"bf"}, kTTest));
    CHECK(text.code == 0);
    CHECK(text.out.find("BF10") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bf", "--theta-hat", "abc", "--se", "1", "--prior", "normal:0:1"}).code == 2);
    CHECK(run({"bf", "--theta-hat", "0.1", "--se", "-1", "--prior", "normal:0:1"}).code == 2);
    CHECK(run({"bf", "--theta-hat", "0.1", "--se", "1", "--prior", "gamma:0:1"}).code == 2);
    CHECK(run({"bf", "--theta-hat", "0.1", "--prior", "normal:0:1"}).code == 2);
    CHECK(run({"bf", "--se", "1", "--prior", "normal:0:1"}).code == 2);
    // theta0 outside the prior support
    CHECK(run({"bf", "--theta-hat", "0.1", "--se", "1", "--prior", "normal:0:1", "--lower", "0.5"}).code == 3);
    // Laplace with the estimate outside a truncated support
    const auto lap = run({"bf", "--theta-hat", "-0.19", "--se", "0.08", "--prior", "normal:0.3:0.15", "--lower", "0",
                          "--method", "laplace"});
    CHECK(lap.code == 3);
    CHECK_FALSE(lap.err.empty());
    CHECK(run({"bf", "--theta-hat", "-0.19", "--se", "0.08", "--prior", "normal:0.3:0.15", "--lower", "0", "--method",
               "laplace", "--ignore-truncation"})
              .code == 0);
    CHECK(run({"bf", "--help"}).code == 0);
    CHECK(run({"reproduce", "--format", "csv"}).code == 2);
}

TEST_CASE("estimate sources") {
    const auto p = run({"bf", "--format", "json", "--p-value", "0.05", "--se", "0.1", "--prior", "normal:0:1"});
    REQUIRE(p.code == 0);
    CHECK(nlohmann::json::parse(p.out)["inputs"]["theta_hat"].get<double>() ==
          doctest::Approx(0.1959963985).epsilon(1e-9));

    const auto s = run({"bf", "--format", "json", "--summary", "4.63,1.48,53,4.87,1.32,57", "--prior",
                        "student_t:0.35:0.102:3", "--lower", "0"});
    REQUIRE(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["inputs"]["se"].get<double>() == doctest::Approx(0.1911688).epsilon(1e-6));

    const auto m = run({"bf", "--format", "json", "--meta", "power_pose", "--coefficient", "alpha", "--prior",
                        "cauchy:0:0.7071067811865476"});
    REQUIRE(m.code == 0);
    CHECK(nlohmann::json::parse(m.out)["bf10"].get<double>() == doctest::Approx(79.17).epsilon(1e-3));

    CHECK(run({"bf", "--theta-hat", "0.1", "--se", "1", "--p-value", "0.05", "--prior", "normal:0:1"}).code == 2);
}

TEST_CASE("posterior grid integrates to one") {
    const auto r = run(cat({"posterior", "--format", "csv"}, kTTest));
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() > 100);
    CHECK(ls[0] == "theta,density");
    double mass = 0.0, prev_t = 0.0, prev_d = 0.0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        double t = 0.0, d = 0.0;
        REQUIRE(std::sscanf(ls[i].c_str(), "%lf,%lf", &t, &d) == 2);
        if (i > 1) mass += 0.5 * (t - prev_t) * (d + prev_d);
        prev_t = t;
        prev_d = d;
    }
    CHECK(std::fabs(mass - 1.0) <= 1e-4);

    const auto j = run(cat({"posterior", "--format", "json", "--quantiles", "0.1,0.9"}, kTTest));
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["quantiles"].size() == 2);
    CHECK(doc["quantiles"][0]["theta"].get<double>() >= 0.0);
}

TEST_CASE("sensitivity CSV") {
    const auto r = run({"sensitivity", "--format", "csv", "--meta", "power_pose", "--coefficient", "alpha", "--prior",
                        "cauchy:0:0.7071067811865476", "--grid", "log:0.05:2:40"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 41);
    CHECK(ls[0] == "varied_value,method,log_bf10,bf10,status");

    const auto fail = run({"sensitivity", "--format", "csv", "--theta-hat", "-0.19", "--se", "0.08", "--prior",
                           "normal:0.3:0.15", "--lower", "0", "--grid", "0.1,0.2", "--method", "laplace"});
    REQUIRE(fail.code == 0);
    const auto fl = lines(fail.out);
    REQUIRE(fl.size() == 3);
    CHECK(fl[1].find("NA") != std::string::npos);

    CHECK(run({"sensitivity", "--theta-hat", "0", "--se", "1", "--prior", "normal:0:1", "--grid", "0.5,0.2"}).code == 2);
}

TEST_CASE("design and sequential") {
    const std::vector<std::string> args{"design", "--format", "json", "--true-effect", "0.3", "--prior", "normal:0:1",
                                        "--looks", "20:100:20", "--reps", "200", "--seed", "7"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["p_h1"].get<double>() + doc["p_h0"].get<double>() + doc["p_max_n"].get<double>() ==
          doctest::Approx(1.0));
    CHECK(run(args).out == a.out);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(run(threaded).out == a.out);

    auto csv = args;
    csv[2] = "csv";
    CHECK(lines(run(csv).out).size() == 201);

    const auto input = temp_file("seq.csv", "theta_hat,se,n\n0.1,0.3,10\n0.2,0.2,20\n0.25,0.1,40\n");
    const auto s = run({"sequential", "--format", "csv", "--input", input.string(), "--prior", "normal:0:1"});
    REQUIRE(s.code == 0);
    const auto sl = lines(s.out);
    REQUIRE(sl.size() == 4);
    CHECK(sl[0] == "look,n,method,log_bf10,status");
    CHECK(run({"sequential", "--input", "/nonexistent/seq.csv", "--prior", "normal:0:1"}).code == 2);
}

TEST_CASE("config files fill in missing flags only") {
    const auto cfg = temp_file("cfg.json", R"({"theta-hat": 5.0, "se": 0.19, "prior": "student_t:0.35:0.102:3",
                                               "lower": 0, "format": "json"})");
    const auto r = run({"bf", "--config", cfg.string(), "--theta-hat", "-0.17"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["inputs"]["theta_hat"].get<double>() == -0.17);
    CHECK(j["bf10"].get<double>() == doctest::Approx(0.0858595744).epsilon(1e-8));

    const auto bad = temp_file("bad.json", "{not json");
    CHECK(run({"bf", "--config", bad.string()}).code == 2);
}

TEST_CASE("reproduce") {
    const auto r = run({"reproduce", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.size() == 4);
    CHECK(run({"reproduce", "t_test"}).code == 0);
    CHECK(run({"reproduce", "nope"}).code == 2);
}
