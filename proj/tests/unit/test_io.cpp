#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "locc/error.hpp"
#include "locc/io.hpp"

using namespace locc;
using io::json;

namespace {

std::string field_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("doubles are written with 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "\"Infinity\"");
  CHECK(io::format_double(std::nan("")) == "\"NaN\"");
}

TEST_CASE("ensemble JSON round trip") {
  const json j = json::parse(R"({"dims": [2, 2], "states": [
      {"prob": 0.5, "label": "phi", "vector": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]},
      {"prob": 0.5, "matrix": [[[0.5, 0], [0, 0], [0, 0], [0, 0]], [[0, 0], [0.5, 0], [0, 0], [0, 0]],
                               [[0, 0], [0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0], [0, 0]]]}]})");
  const Ensemble e = io::ensemble_from_json(j);
  CHECK(e.size() == 2);
  CHECK(e.items()[0].pure);
  CHECK_FALSE(e.items()[1].pure);
  CHECK(e.labels() == std::vector<std::string>{"phi", "1"});
  const Ensemble back = io::ensemble_from_json(io::ensemble_to_json(e));
  CHECK((back.items()[1].state.mat() - e.items()[1].state.mat()).norm() == 0.0);
}

TEST_CASE("ensemble JSON errors name the field") {
  CHECK(field_of([] { io::ensemble_from_json(json::parse(R"({"states": []})")); }) == "dims");
  CHECK(field_of([] { io::ensemble_from_json(json::parse(R"({"dims": [2], "states": [{"vector": [[1,0],[0,0]]}]})")); }) ==
        "states[0].prob");
  CHECK(field_of([] {
          io::ensemble_from_json(json::parse(R"({"dims": [2], "states": [{"prob": 1, "vector": [[1,0],[0]]}]})"));
        }) == "states[0].vector[1]");
  CHECK(field_of([] { io::ensemble_from_json(json::parse(R"({"dims": [2], "states": [{"prob": 1}]})")); }) ==
        "states[0]");
  CHECK(field_of([] {
          io::ensemble_from_json(json::parse(
              R"({"dims": [2], "states": [{"prob": 0.6, "vector": [[1,0],[0,0]]}, {"prob": 0.6, "vector": [[0,0],[1,0]]}]})"));
        }) == "states");
}

TEST_CASE("protocol JSON round trip and errors") {
  const json j = json::parse(R"({"party": "A", "kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]],
      "children": {"1": {"party": "B", "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}}})");
  const ProtocolTree t = io::protocol_from_json(j);
  CHECK(t.depth() == 2);
  CHECK(t.children().count(1) == 1);
  CHECK(io::protocol_to_json(t) == j);

  json bad = j;
  bad["children"]["x"] = bad["children"]["1"];
  CHECK(field_of([&] { io::protocol_from_json(bad); }) == "children.x");
  bad = j;
  bad["children"]["5"] = bad["children"]["1"];
  CHECK(field_of([&] { io::protocol_from_json(bad); }) == "children.5");
  bad = j;
  bad["party"] = "C";
  CHECK(field_of([&] { io::protocol_from_json(bad); }) == "party");
  bad = j;
  bad["kraus"].erase(1);
  CHECK(field_of([&] { io::protocol_from_json(bad); }) == "kraus");
}

TEST_CASE("family specs") {
  const auto spec = io::spec_from_json(json::parse(R"({"family": "tensor_power", "params": {"a1": [0.9, 0.6]}})"));
  CHECK(spec.family == Family::TensorPower);
  CHECK(spec.a1 == std::vector<double>{0.9, 0.6});
  const auto one = io::spec_from_json(json::parse(R"({"family": "partial4", "params": {"a1": 0.5}})"));
  CHECK(one.a1 == std::vector<double>{0.5});
  CHECK(field_of([] { io::spec_from_json(json::parse(R"({"family": "bell4", "params": {"d": 2.5}})")); }) ==
        "params.d");
}

TEST_CASE("syntax errors report line and column") {
  const std::string path = "io_test_bad.json";
  {
    std::ofstream f(path);
    f << "{\n  \"dims\": [2,\n}";
  }
  const std::string field = field_of([&] { io::load_json_file(path); });
  CHECK(field.rfind(path + ":3:", 0) == 0);
  std::remove(path.c_str());
  CHECK(field_of([] { io::load_json_file("does/not/exist.json"); }) == "does/not/exist.json");
}

TEST_CASE("flat reports keep insertion order") {
  io::FlatReport f;
  f.add("b", 1.5).add("a", 2).add("flag", true).add("name", "x\"y");
  io::FlatReport g;
  g.add("inner", 0.25);
  f.merge("sub.", g);
  CHECK(f.to_json() == "{\n  \"b\": 1.5,\n  \"a\": 2,\n  \"flag\": true,\n  \"name\": \"x\\\"y\",\n  \"sub.inner\": 0.25\n}\n");
  REQUIRE(f.find("sub.inner"));
  CHECK(std::get<double>(*f.find("sub.inner")) == 0.25);
  CHECK(f.find("missing") == nullptr);
}
