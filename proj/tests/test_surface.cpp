#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pcwf/error.hpp"
#include "pcwf/io.hpp"
#include "pcwf/surface.hpp"

using namespace pcwf;
using namespace pcwf::surface;

namespace {

const std::filesystem::path kData = PCWF_DATA_DIR;

std::vector<Binder> binders(const std::string& text) {
  if (text.empty()) return {};
  // "x:{2}, y:{3}" parsed through a throwaway declaration
  Script s = parse_script("term t : {1} = #0 in H, " + text);
  return std::get<TermDecl>(s.decls.front()).binders;
}

InputError parse_failure(const std::string& text) {
  try {
    (void)parse_script(text);
  } catch (const InputError& e) {
    return e;
  }
  FAIL("parsed: " << text);
  return InputError("");
}

std::string elaborated(const std::string& ctx, const std::string& term, const std::string& type) {
  return print_combinator(*elaborate(binders(ctx), parse_term(term), parse_type(type)).term);
}

}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("parsing declarations") {
    Script s = parse_script("term id : Pi(x:{2}) {2} = \\x. x in H");
    auto& d = std::get<TermDecl>(s.decls.front());
    CHECK(d.name == "id");
    CHECK(d.term->kind == SurfaceTerm::Kind::kLam);
    CHECK(d.term->left->kind == SurfaceTerm::Kind::kVar);
    CHECK(d.type->kind == SurfaceType::Kind::kPi);

    Script k = parse_script("term k : {3} = #1 in H, x:{2}");
    auto& kd = std::get<TermDecl>(k.decls.front());
    CHECK(kd.term->kind == SurfaceTerm::Kind::kLit);
    CHECK(kd.term->value == 1);
    REQUIRE(kd.binders.size() == 1);
    CHECK(kd.binders[0].name == "x");

    Script all = parse_script(
        "ctx H = empty\nctx Y = yoneda \"c.json\" b\nctx L = load \"h.json\"\n"
        "type T = load \"t.json\" in L\ntype S = Sigma(a:{2}) T in L\neval k\ncheck k");
    CHECK(all.decls.size() == 7);
  }

  TEST_CASE("syntax errors carry positions") {
    auto e = parse_failure("term f : Pi(x:{2}) {2} = \\x");
    CHECK(e.line() == 1);
    CHECK(e.col() == 28);
    auto e2 = parse_failure("ctx H = empty\n  term t : {2} = ) in H");
    CHECK(e2.line() == 2);
    CHECK(e2.col() == 18);
    auto dup = parse_failure("ctx H = empty\nctx H = empty");
    CHECK(dup.message().find("duplicate") != std::string::npos);
    CHECK(parse_failure("term t : {2} = x in H, x:{2}, x:{2}").message().find("duplicate") != std::string::npos);
    CHECK(parse_failure("term t : {2} = x @ in H").col() == 18);
  }

  TEST_CASE("application, projections and lambdas associate as documented") {
    auto t = parse_term("f x y");
    REQUIRE(t->kind == SurfaceTerm::Kind::kApp);
    CHECK(t->left->kind == SurfaceTerm::Kind::kApp);
    CHECK(t->right->name == "y");
    auto l = parse_term("\\x. f x");
    CHECK(l->kind == SurfaceTerm::Kind::kLam);
    CHECK(l->left->kind == SurfaceTerm::Kind::kApp);
    auto p = parse_term("f p.1");
    CHECK(p->right->kind == SurfaceTerm::Kind::kFst);
  }

  TEST_CASE("variables elaborate to q under weakenings") {
    const std::string ctx = "x:{2}, y:{3}, z:{4}";
    CHECK(elaborated(ctx, "z", "{4}") == "q");
    CHECK(elaborated(ctx, "y", "{3}") == "(q)p");
    CHECK(elaborated(ctx, "x", "{2}") == "((q)p)p");
    CHECK(elaborated("", "\\x. x", "Pi(x:{2}) {2}") == "lam(q)");
    CHECK(elaborated("x:{2}", "\\y. x", "Pi(y:{3}) {2}") == "lam((q)p)");
    CHECK(elaborated("x:{2}, y:{3}", "(y, x)", "Sigma(a:{3}) {2}") == "(q, (q)p)");
    CHECK(elaborated("p:Sigma(a:{2}) {3}", "p.2", "{3}") == "q.2");
  }

  TEST_CASE("elaboration errors") {
    CHECK_THROWS_AS(elaborated("x:{2}", "w", "{2}"), InputError);
    try {
      elaborated("x:{2}, y:{3}", "w", "{2}");
    } catch (const InputError& e) {
      CHECK(e.message().find("'w'") != std::string::npos);
      CHECK(e.message().find("x, y") != std::string::npos);
    }
    CHECK_THROWS_AS(elaborated("x:{2}", "x", "{3}"), InputError);
    CHECK_THROWS_AS(elaborated("", "#2", "{2}"), InputError);
    CHECK_THROWS_AS(elaborated("", "\\x. x", "{2}"), InputError);
    CHECK_THROWS_AS(elaborated("x:{2}", "x x", "{2}"), InputError);
  }

  TEST_CASE("identity applied to a literal evaluates to the literal") {
    Model model{empty_ctx(terminal_cat()), {}, kDefaultPiCap};
    auto type = parse_type("Pi(x:{2}) {2}");
    auto lam = elaborate({}, parse_term("\\x. x"), type);
    CHECK(print_combinator(*lam.term) == "lam(q)");
    ContextChain chain = interpret_context(model, {});
    TmInCtx id = interpret_term(model, chain, *lam.term);
    CHECK(validate_tm(id).ok());
    TmInCtx one = discrete_tm(model.base, FinSet{2, {}}, 1);
    CHECK(app_tm(id, one)(ObjId{0}, 0) == 1);
  }

  TEST_CASE("printing round-trips") {
    for (const char* text : {"z", "x", "\\x. x", "f (\\x. x) y", "(f x).1 (a, \\y. y)", "\\f. \\x. f (f x)",
                             "((p.1).2, #3)", "f x.2 (g y)"}) {
      auto t = parse_term(text);
      CHECK(same_term(*parse_term(print_surface(*t)), *t));
    }
    for (const char* text : {"{2}", "Pi(x:{2}) Sigma(y:A) {0}", "Pi(f:Pi(x:{1}) {2}) B"}) {
      auto t = parse_type(text);
      CHECK(print_type(*t) == text);
      CHECK(same_type(*parse_type(print_type(*t)), *t));
    }
    for (const char* file : {"identity.mltt", "variables.mltt", "pairs.mltt"}) {
      std::ifstream in(kData / file);
      std::stringstream buf;
      buf << in.rdbuf();
      Script s = parse_script(buf.str());
      CHECK(same_script(parse_script(print_script(s)), s));
    }
  }

  TEST_CASE("scripts") {
    auto id = run_script_file(kData / "identity.mltt");
    REQUIRE(id.terms.size() == 2);
    CHECK(id.terms[1].value(ObjId{0}, 0) == 1);
    CHECK(id.eval_targets == std::vector<std::string>{"one"});
    CHECK(id.check_targets == std::vector<std::string>{"id"});

    auto pairs = run_script_file(kData / "pairs.mltt");
    for (const auto& t : pairs.terms) CHECK(t.validation.ok());

    auto vars = run_script_file(kData / "variables.mltt");
    REQUIRE(vars.terms.size() == 3);
    CHECK(print_combinator(*vars.terms[0].combinator) == "((q)p)p");
    CHECK(print_combinator(*vars.terms[1].combinator) == "(q)p");
    CHECK(print_combinator(*vars.terms[2].combinator) == "q");

    auto fails = [](const std::string& text) {
      try {
        run_script(parse_script(text), kData);
      } catch (const InputError& e) {
        return e.line();
      }
      return std::size_t{0};
    };
    CHECK(fails("ctx H = empty\nterm t : {2} = y in H, x:{2}") == 2);
    CHECK(fails("ctx H = empty\nterm t : T = #0 in H") == 2);
    CHECK(fails("ctx H = empty\nctx K = empty\ntype T = {2} in K\nterm t : T = #0 in H") == 4);
    CHECK(fails("term t : {2} = #0 in H") == 1);
    CHECK(fails("ctx H = yoneda \"walking_arrow.json\" c") == 1);
    CHECK(fails("ctx H = empty\neval nothing") == 2);
  }
}
