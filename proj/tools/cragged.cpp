#include "cragged/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace cragged::cli;
  CLI::App app{"exact checks for stacky fans"};
  app.require_subcommand(1);

  struct Bound {
    CLI::App* sub;
    std::string verb;
    std::map<std::string, std::vector<std::string>> values;
    std::map<std::string, bool> flags;
  };
  static const std::map<std::string, std::string> about = {
      {"validate", "validate a fan document"},
      {"cragged", "decide exhaustiveness, unimodularity and craggedness"},
      {"fiber", "fiber of the lambda map over a covector"},
      {"patterns", "enumerate integrality patterns with fiber convexity"},
      {"hom", "dimension and basis of Hom between two characters"},
      {"hommatrix", "Hom matrix between a list of characters"},
      {"fwps", "fan of a fake weighted projective space"},
      {"quotient", "quotient of a fan by a finite subgroup"},
      {"gale", "Gale dual of the ray matrix"},
      {"catalog", "print a built-in fan"},
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const auto& [verb, specs] : verb_table()) {
    auto b = std::make_unique<Bound>();
    b->verb = verb;
    b->sub = app.add_subcommand(verb, about.at(verb));
    for (const auto& s : specs) {
      if (s.flag) {
        b->sub->add_flag("--" + s.name, b->flags[s.name], s.help);
      } else {
        auto* opt = b->sub->add_option("--" + s.name, b->values[s.name], s.help);
        if (!s.repeated) opt->expected(1);
        opt->allow_extra_args(false);
      }
    }
    bound.push_back(std::move(b));
  }

  if (argc > 1 && argv[1][0] != '-' && !verb_table().count(argv[1])) {
    std::cerr << error_json("SchemaError", std::string("unknown verb '") + argv[1] + "'");
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("ParseError", e.what());
    return 2;
  }

  for (const auto& b : bound) {
    if (!b->sub->parsed()) continue;
    Command cmd{b->verb, {}};
    for (const auto& [name, vals] : b->values)
      if (!vals.empty()) cmd.options[name] = vals;
    for (const auto& [name, on] : b->flags)
      if (on) cmd.options[name] = {};
    auto res = run(cmd, std::cin);
    std::cout << res.out;
    std::cerr << res.err;
    return res.exit_code;
  }
  return 2;
}
