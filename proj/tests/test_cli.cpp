#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(WITTKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer;
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string data(const std::string& filename) {
  return std::string(WITTKIT_TEST_DATA_DIR) + "/" + filename;
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(WITTKIT_TEST_DATA_DIR) + "/../../docs/schemas/" + name);
  REQUIRE(in.good());
  json schema;
  in >> schema;
  return schema;
}

// Minimal structural validator: type, required, properties, items, "$ref": "#".
bool validate(const json& value, const json& schema, const json& root) {
  if (schema.contains("$ref")) {
    REQUIRE(schema["$ref"] == "#");
    return validate(value, root, root);
  }
  if (schema.contains("type")) {
    const auto check_type = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "integer") return value.is_number_integer();
      if (t == "number") return value.is_number();
      if (t == "boolean") return value.is_boolean();
      return false;
    };
    if (schema["type"].is_string()) {
      if (!check_type(schema["type"].get<std::string>())) return false;
    } else {
      bool any = false;
      for (const auto& t : schema["type"])
        if (check_type(t.get<std::string>())) any = true;
      if (!any) return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (value.contains(key) && !validate(value[key], sub, root)) return false;
  }
  if (value.is_array() && schema.contains("items")) {
    for (const auto& item : value)
      if (!validate(item, schema["items"], root)) return false;
  }
  return true;
}

bool validates_against(const std::string& text, const std::string& schema_name) {
  const json value = json::parse(text);
  const json schema = load_schema(schema_name);
  return validate(value, schema, schema);
}

}  // namespace

TEST_CASE("witt on the suspended torus: exit 2, failing strata named") {
  const auto res = run_cli("witt " + data("sigma_t2.json"));
  CHECK(res.exit_code == 2);
  const json report = json::parse(res.stdout_text);
  CHECK(report["witt"] == false);
  int failing = 0;
  for (const auto& s : report["strata"])
    if (!s["pass"].get<bool>()) {
      failing++;
      CHECK(s["middle_rank"] == 2);
    }
  CHECK(failing == 2);
  CHECK(validates_against(res.stdout_text, "witt.schema.json"));
}

TEST_CASE("witt on the suspended sphere: exit 0") {
  const auto res = run_cli("witt " + data("sigma_s2.json"));
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.stdout_text)["witt"] == true);
}

TEST_CASE("ih ranks via the CLI") {
  const auto res = run_cli("ih " + data("sigma_t2.json") + " --perversity lower-middle");
  CHECK(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["ranks"] == json::array({1, 2, 0, 1}));
  CHECK(report["subdivisions"] == 1);
  CHECK(validates_against(res.stdout_text, "ih.schema.json"));

  const auto upper = run_cli("ih " + data("sigma_t2.json") + " --perversity upper-middle");
  CHECK(json::parse(upper.stdout_text)["ranks"] == json::array({1, 0, 2, 1}));

  const auto custom = run_cli("ih " + data("sigma_t2.json") + " --perversity custom:0,1");
  CHECK(custom.exit_code == 0);
}

TEST_CASE("signature via the CLI matches the schema") {
  const auto res = run_cli("signature " + data("cp2_9.json"));
  CHECK(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["signature"] == 1);
  CHECK(report["middle_rank"] == 1);
  CHECK(report["matrix"] == json::array({json::array({"1"})}));
  CHECK(validates_against(res.stdout_text, "signature.schema.json"));
}

TEST_CASE("check reports structure and depth") {
  const auto res = run_cli("check " + data("sigma_t2.json"));
  CHECK(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["ok"] == true);
  CHECK(report["depth"] == 1);
  CHECK(report["strata"].size() == 3);
  CHECK(validates_against(res.stdout_text, "check.schema.json"));
}

TEST_CASE("resolve emits tree JSON") {
  const auto res = run_cli("resolve " + data("sigma_t2.json"));
  CHECK(res.exit_code == 0);
  const json tree = json::parse(res.stdout_text);
  CHECK(tree["depth"] == 1);
  CHECK(tree["hypersurfaces"].size() == 2);
  CHECK(tree["rho_factors"].size() == 2);
  CHECK(tree["ifs"]["ok"] == true);
  CHECK(validates_against(res.stdout_text, "resolve.schema.json"));
}

TEST_CASE("indicial roots via the CLI") {
  const auto res =
      run_cli("indicial " + data("spectrum_f2_harmonic.json") + " --weight 0.5");
  CHECK(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["roots"] == json::array({-3.0, -2.0, -1.0, 0.0}));
  CHECK(report["exact"] == true);
  CHECK(validates_against(res.stdout_text, "indicial.schema.json"));

  const auto window =
      run_cli("indicial " + data("spectrum_f2_harmonic.json") +
              " --weight 1/2 --alpha 0 --epsilon 2/5");
  CHECK(window.exit_code == 0);
  CHECK(json::parse(window.stdout_text)["window"]["clear"] == true);

  const auto blocked =
      run_cli("indicial " + data("spectrum_f2_harmonic.json") +
              " --weight 1/2 --alpha 0 --epsilon 3/5");
  CHECK(blocked.exit_code == 2);
  CHECK(json::parse(blocked.stdout_text)["window"]["clear"] == false);
}

TEST_CASE("gap subcommand") {
  const auto res = run_cli("gap " + data("spectrum_circle_4pi.json"));
  CHECK(res.exit_code == 2);  // lambda_min = 1/4 < 1
  const json report = json::parse(res.stdout_text);
  CHECK(report["gap_condition"] == false);
  CHECK(report["rescale"]["c_max"] == "1/2");
  CHECK(report["rescale"]["scaled_gap_condition"] == true);
  CHECK(validates_against(res.stdout_text, "gap.schema.json"));

  const auto ok = run_cli("gap " + data("spectrum_f2_harmonic.json"));
  CHECK(ok.exit_code == 0);
}

TEST_CASE("input errors exit 1 with machine-readable reports") {
  const auto missing = run_cli("ih /nonexistent/file.json");
  CHECK(missing.exit_code == 1);
  const json err = json::parse(missing.stdout_text);
  CHECK(err.contains("error"));
  CHECK(err.contains("detail"));
  CHECK(validates_against(missing.stdout_text, "error.schema.json"));

  const auto bad_perversity =
      run_cli("ih " + data("sigma_t2.json") + " --perversity custom:0,9");
  CHECK(bad_perversity.exit_code == 1);
  CHECK(json::parse(bad_perversity.stdout_text)["error"] == "MalformedInput");
}

TEST_CASE("byte-identical output across runs") {
  for (const std::string& invocation :
       {std::string("ih ") + data("sigma_t2.json") + " --perversity upper-middle",
        std::string("witt ") + data("sigma_t2.json"),
        std::string("signature ") + data("cp2_9.json"),
        std::string("resolve ") + data("sigma_t2.json"),
        std::string("indicial ") + data("spectrum_f2_harmonic.json") + " --weight 1/2"}) {
    const auto first = run_cli(invocation);
    const auto second = run_cli(invocation);
    CHECK(first.exit_code == second.exit_code);
    CHECK(first.stdout_text == second.stdout_text);
  }
}

TEST_CASE("--out writes the report to a file") {
  const std::string out_path = "/tmp/wittkit_cli_out_test.json";
  std::remove(out_path.c_str());
  const auto res = run_cli("ih " + data("sigma_t2.json") + " --out " + out_path);
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  json report;
  in >> report;
  CHECK(report["ranks"] == json::array({1, 2, 0, 1}));
  std::remove(out_path.c_str());
}
