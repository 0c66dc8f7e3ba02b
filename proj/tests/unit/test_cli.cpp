#include <doctest.h>

#include "cli.hpp"
#include "qmo/io.hpp"

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using qmo::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qmo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qmo_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string str(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  const std::string out = str(scratch("usage"));
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"run", "--scenario", "nope", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--param", "ell=2", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--param", "q", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--param", "q=abc", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--param", "pauli_superposition.n=4", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--format", "xml", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--jobs", "0", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--tol", "qcmi_equals_q=x", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--tol", "qcmi_equals_q=-1", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "unitary_blocking", "--param", "ell=5", "--out", out}).code == 2);
  CHECK(cli({"run", "--scenario", "werner", "--config", out + "/missing.json"}).code == 2);
  const Result r = cli({"run", "--scenario", "werner", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error") != std::string::npos);
  // Nothing is written when arguments are rejected.
  CHECK(fs::is_empty(out));
}

TEST_CASE("help and list exit with 0") {
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"run", "--help"}).code == 0);
  const Result l = cli({"list"});
  CHECK(l.code == 0);
  CHECK(l.out.find("ic_causal_break") != std::string::npos);
}

TEST_CASE("scenario runs report pass and fail through the exit code") {
  const fs::path out = scratch("run");
  const Result p = cli({"run", "--scenario", "pauli_superposition", "--out", str(out)});
  CHECK(p.code == 0);
  const json rep = qmo::load_json(str(out / "pauli_superposition.json"));
  CHECK(rep.at("pass") == true);
  for (const auto& c : rep.at("checks"))
    if (c.at("name") == "qcmi_bits") CHECK(c.at("actual").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fs::exists(out / "pauli_superposition.process_tensor.json"));

  const Result w = cli({"run", "--scenario", "werner", "--out", str(out)});
  CHECK(w.code == 1);
  CHECK(w.out.find("failed: werner/qcmi_equals_q [equal]") != std::string::npos);
  CHECK(cli({"run", "--scenario", "werner", "--param", "r=0.34", "--out", str(out)}).code == 0);
  CHECK(cli({"run", "--scenario", "werner", "--tol", "qcmi_equals_q=0.2", "--out", str(out)}).code == 0);
  CHECK(cli({"run", "--scenario", "werner", "--param", "werner.r=0.3333333333333333", "--out", str(out)}).code == 0);
}

TEST_CASE("seed and parameter routing") {
  const fs::path out = scratch("route");
  // q only exists in werner; the run must still accept it alongside pauli.
  CHECK(cli({"run", "--scenario", "pauli_superposition", "--scenario", "werner", "--param", "q=0.25,r=0.2",
             "--seed", "3", "--out", str(out)})
            .code == 1);
  const json w = qmo::load_json(str(out / "werner.json"));
  CHECK(w.at("params").at("q") == 0.25);
  CHECK(w.at("params").at("seed") == 3);
  CHECK_FALSE(qmo::load_json(str(out / "pauli_superposition.json")).at("params").contains("seed"));
}

TEST_CASE("config files and csv output") {
  const fs::path dir = scratch("config");
  const fs::path cfg = dir / "run.json";
  qmo::write_atomic(str(cfg), json{{"scenario", {"classical_fuzzy", "werner"}},
                                   {"params", {{"werner", {{"q", 0.75}}}, {"p", 0.3}}},
                                   {"tol", {{"qcmi_equals_q", 0.3}}},
                                   {"format", "csv"},
                                   {"out", str(dir / "o")},
                                   {"jobs", 2}}
                                  .dump());
  CHECK(cli({"run", "--config", str(cfg)}).code == 0);
  const std::string csv = qmo::read_text(str(dir / "o" / "werner.csv"));
  CHECK(csv.rfind("scenario,name,kind,expected,actual,tol,pass\n", 0) == 0);
  CHECK(csv.find("werner,qcmi_equals_q,equal,0.75,") != std::string::npos);
  // Command-line flags win over the file.
  CHECK(cli({"run", "--config", str(cfg), "--format", "json", "--out", str(dir / "j")}).code == 0);
  CHECK(fs::exists(dir / "j" / "classical_fuzzy.json"));

  qmo::write_atomic(str(cfg), json{{"scenario", "werner"}, {"colour", "red"}}.dump());
  CHECK(cli({"run", "--config", str(cfg)}).code == 2);
  qmo::write_atomic(str(cfg), "{not json");
  CHECK(cli({"run", "--config", str(cfg)}).code == 2);
}

TEST_CASE("reports are byte-identical across job counts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> ids{"collision_trash_prepare", "ic_causal_break", "werner", "classical_fuzzy"};
  std::vector<std::string> base{"run", "--seed", "5"};
  for (const auto& id : ids) {
    base.push_back("--scenario");
    base.push_back(id);
  }
  auto with = [&](const fs::path& out, const std::string& jobs) {
    auto v = base;
    v.insert(v.end(), {"--out", str(out), "--jobs", jobs});
    return cli(v);
  };
  CHECK(with(a, "1").code == 1);
  CHECK(with(b, "3").code == 1);
  for (const auto& e : fs::directory_iterator(a))
    CHECK(qmo::read_text(str(e.path())) == qmo::read_text(str(b / e.path().filename())));
}

TEST_CASE("check subcommand") {
  const fs::path dir = scratch("check");
  REQUIRE(cli({"run", "--scenario", "ic_causal_break", "--out", str(dir)}).code == 0);
  const std::string tensor = str(dir / "ic_causal_break.process_tensor.json");

  const Result c = cli({"check", tensor, "--kind", "causality"});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("pass") == true);
  CHECK(cli({"check", tensor, "--kind", "psd"}).code == 0);

  const fs::path inst = dir / "cb.json";
  qmo::write_atomic(str(inst), json{{"kind", "causal_break_sic"},
                                    {"steps", {{{"timestep", 2}}, {{"timestep", 1}, {"measure", false}}}}}
                                   .dump());
  const Result m = cli({"check", tensor, "--kind", "markov-order", "--instrument", str(inst), "--memory", "2o,2i,1o"});
  CHECK(m.code == 0);
  CHECK(json::parse(m.out).at("rows").size() == 64);
  CHECK(cli({"check", tensor, "--kind", "markov-order", "--instrument", str(inst), "--memory", "2o,2i,1o",
             "--future", "3i", "--history", "1i"})
            .code == 0);
  CHECK(cli({"check", tensor, "--kind", "markov-order", "--memory", "2o,2i,1o"}).code == 2);
  CHECK(cli({"check", tensor, "--kind", "markov-order", "--instrument", str(inst), "--memory", "7i"}).code == 2);
  CHECK(cli({"check", tensor, "--kind", "entropy"}).code == 2);
  CHECK(cli({"check", str(dir / "absent.json"), "--kind", "psd"}).code == 2);
  CHECK(cli({"check", tensor}).code == 2);

  // Flip the sign: still a valid tensor file, but no longer positive.
  json doc = qmo::load_json(tensor).at("data");
  qmo::ProcessTensor t = qmo::process_tensor_from_json(doc);
  t.op = -t.op;
  const fs::path bad = dir / "negated.json";
  qmo::write_atomic(str(bad), qmo::to_json(t).dump());
  CHECK(cli({"check", str(bad), "--kind", "psd"}).code == 1);
  CHECK(cli({"check", str(bad), "--kind", "causality"}).code == 1);

  doc["entries"] = "@@@@";
  qmo::write_atomic(str(bad), doc.dump());
  CHECK(cli({"check", str(bad), "--kind", "psd"}).code == 2);
}
