// Command-line front end.  Every subcommand prints exactly one JSON document
// on stdout and exits 0 on success, 1 on a computation error (the document is
// then {"error": ...}), or 2 on a usage error (message on stderr, no JSON).
//
// Scalars in the output follow fixed shapes: mu_m values as {"m":..,"exp":..},
// roots of unity as {"num":a,"den":b} meaning e(a/b), square classes as one
// of "1"/"u"/"p"/"up", signs as plain +1/-1.
//
// Field elements on the command line are rational strings ("5", "-3/49"; the
// denominator may carry any power of p).  Elements of a quadratic algebra are
// either "A+B√D" (also spelled sqrtD; B and the +A part optional) or a plain
// pair "x,y": the two split coordinates for a split torus, A and B otherwise.

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <charconv>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mtp/suites.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using mtp::AdditiveCharacter;
using mtp::FieldElement;
using mtp::LocalField;
using mtp::MuM;
using mtp::QuadEtale;
using mtp::RootOfUnity;
using mtp::SquareClass;
using mtp::KElem;

/// Bad command-line input: reported on stderr with exit code 2, as opposed to
/// computation errors, which produce an {"error": ...} document and code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  long p = 0;
  long m = 2;
  long precision = -1;  // unset = take MTP_PRECISION or the built-in default
  long psi_level = 0;
  std::string psi_twist = "1";
  std::uint64_t seed = 42;
};

void require_min(long v, long lo, const char* what) {
  if (v < lo)
    throw UsageError(std::string(what) + " must be at least " +
                     std::to_string(lo));
}

void add_field_flags(CLI::App* cmd, Global& g, bool need_m) {
  cmd->add_option("--p", g.p, "odd residue characteristic")->required();
  auto* om = cmd->add_option("--m", g.m, "cover degree (divides p-1)");
  if (need_m) om->required();
  cmd->add_option("--precision", g.precision, "working pi-adic precision");
}

void add_psi_flags(CLI::App* cmd, Global& g) {
  cmd->add_option("--psi-level", g.psi_level,
                  "additive character level (default 0)");
  cmd->add_option("--psi-twist", g.psi_twist,
                  "additive character twist, a rational literal (default 1)");
}

int resolve_prec(const Global& g) {
  if (g.precision >= 0) {
    require_min(g.precision, 1, "--precision");
    return static_cast<int>(g.precision);
  }
  if (const char* env = std::getenv("MTP_PRECISION")) {
    long v = 0;
    auto [p, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec != std::errc{} || *p != '\0' || v <= 0)
      throw UsageError("MTP_PRECISION must be a positive integer");
    return static_cast<int>(v);
  }
  return mtp::kDefaultPrec;
}

const LocalField& base_field(const Global& g) {
  return LocalField::base(g.p, resolve_prec(g));
}

// ---------------------------------------------------------------------------
// literal parsing

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out += c;
  return out;
}

long long parse_ll(const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw UsageError("not an integer: '" + s + "'");
  return v;
}

struct Rat {
  long long num = 0;
  long long den = 1;
};

Rat parse_rat(const std::string& raw) {
  std::string s = strip(raw);
  if (s.empty()) throw UsageError("empty rational literal");
  Rat r;
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    r.num = parse_ll(s);
    return r;
  }
  if (s.find('/', slash + 1) != std::string::npos)
    throw UsageError("malformed rational: '" + raw + "'");
  r.num = parse_ll(s.substr(0, slash));
  r.den = parse_ll(s.substr(slash + 1));
  if (r.den == 0) throw UsageError("zero denominator in '" + raw + "'");
  return r;
}

FieldElement rat_elem(const LocalField& F, const std::string& s) {
  Rat r = parse_rat(s);
  return FieldElement::from_rational(F, r.num, r.den);
}

/// Comma-separated list; every piece must be nonempty.
std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (const auto& piece : out)
    if (strip(piece).empty())
      throw UsageError("empty entry in list '" + s + "'");
  return out;
}

std::size_t sqrt_suffix_pos(const std::string& s) {
  static const char* kSuffixes[] = {"\xE2\x88\x9A"
                                    "D",
                                    "sqrt(D)", "sqrtD"};
  for (const char* suf : kSuffixes) {
    std::size_t len = std::strlen(suf);
    if (s.size() >= len && s.compare(s.size() - len, len, suf) == 0)
      return s.size() - len;
  }
  return std::string::npos;
}

KElem parse_kelem(const QuadEtale& K, const std::string& raw) {
  std::string s = strip(raw);
  if (s.empty()) throw UsageError("empty element literal");
  const LocalField& F = K.base();
  auto comma = s.find(',');
  if (comma != std::string::npos) {
    if (s.find(',', comma + 1) != std::string::npos)
      throw UsageError("an algebra element has two coordinates: '" + raw +
                       "'");
    FieldElement a = rat_elem(F, s.substr(0, comma));
    FieldElement b = rat_elem(F, s.substr(comma + 1));
    if (K.is_split()) return KElem::split_pair(K, a, b);
    return KElem::from_parts(K, a, b);
  }
  std::size_t suf = sqrt_suffix_pos(s);
  if (suf == std::string::npos) {
    FieldElement a = rat_elem(F, s);
    if (K.is_split()) return KElem::split_pair(K, a, a);
    return KElem::from_parts(K, a, FieldElement::from_int(F, 0));
  }
  std::string head = s.substr(0, suf);
  if (!head.empty() && head.back() == '*') head.pop_back();
  std::string apart, rpart;
  if (head.empty()) {
    rpart = "1";
  } else {
    std::size_t cut = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
      char c = head[i];
      char prev = head[i - 1];
      if ((c == '+' || c == '-') && prev != '/' && prev != '+' && prev != '-') {
        cut = i;
        break;
      }
    }
    if (cut == std::string::npos) {
      rpart = head;
    } else {
      apart = head.substr(0, cut);
      rpart = head.substr(cut);
      if (rpart == "+")
        rpart = "1";
      else if (rpart == "-")
        rpart = "-1";
      else if (rpart[0] == '+')
        rpart = rpart.substr(1);
    }
  }
  FieldElement a =
      apart.empty() ? FieldElement::from_int(F, 0) : rat_elem(F, apart);
  FieldElement r = rat_elem(F, rpart);
  return KElem::from_parts(K, a, r);
}

QuadEtale parse_algebra(const LocalField& F, const std::string& kind) {
  std::string k = strip(kind);
  if (k == "split") return QuadEtale::split(F);
  if (k == "u") return QuadEtale::field(F, SquareClass::U);
  if (k == "p") return QuadEtale::field(F, SquareClass::P);
  if (k == "up") return QuadEtale::field(F, SquareClass::UP);
  throw UsageError("torus kind must be split, u, p, or up (got '" + kind +
                   "')");
}

mtp::stab::TorusParam parse_torus(const LocalField& F,
                                  const std::string& kinds,
                                  const std::string& clist) {
  mtp::stab::TorusParam T;
  for (const auto& k : split_list(kinds, ',')) T.blocks.push_back(parse_algebra(F, k));
  if (!clist.empty()) {
    for (const auto& c : split_list(clist, ','))
      T.cprime.push_back(rat_elem(F, c));
    if (T.cprime.size() != T.rank())
      throw UsageError("one c scalar per block is required");
  }
  return T;
}

std::vector<FieldElement> parse_scalars(const LocalField& F,
                                        const std::string& list) {
  std::vector<FieldElement> out;
  for (const auto& piece : split_list(list, ',')) out.push_back(rat_elem(F, piece));
  return out;
}

mtp::packet::TorsionPoint parse_torsion(const std::string& raw,
                                        std::size_t blocks) {
  mtp::packet::TorsionPoint g0;
  std::string s = strip(raw);
  if (s.empty()) throw UsageError("empty sign list");
  if (s.find(',') == std::string::npos &&
      s.find_first_not_of("+-") == std::string::npos) {
    for (char c : s) g0.sign.push_back(c == '+' ? 1 : -1);
  } else {
    for (const auto& piece : split_list(s, ',')) {
      long long v = parse_ll(strip(piece));
      if (v != 1 && v != -1) throw UsageError("signs must be +1 or -1");
      g0.sign.push_back(static_cast<int>(v));
    }
  }
  if (g0.sign.size() != blocks)
    throw UsageError("one sign per block is required");
  return g0;
}

int parse_sign(long long v, const char* what) {
  if (v != 1 && v != -1)
    throw UsageError(std::string(what) + " must be +1 or -1");
  return static_cast<int>(v);
}

AdditiveCharacter make_psi(const LocalField& F, const Global& g) {
  return AdditiveCharacter::standard(F, g.psi_level, rat_elem(F, g.psi_twist));
}

void require_norm_one(const KElem& x, const char* what) {
  FieldElement n = x.norm();
  if (!n.sub(FieldElement::one(n.field())).is_zero_like())
    throw mtp::BadInput(std::string(what) + " must have norm 1");
}

// ---------------------------------------------------------------------------
// output shapes

ojson mu_json(const MuM& z) {
  ojson j;
  j["m"] = z.m();
  j["exp"] = z.exp();
  return j;
}

ojson root_json(const RootOfUnity& r) {
  ojson j;
  j["num"] = r.num();
  j["den"] = r.den();
  return j;
}

void emit(const ojson& j) {
  std::cout << j.dump(-1, ' ', false, ojson::error_handler_t::replace)
            << "\n";
}

// ---------------------------------------------------------------------------
// subcommands

struct SymbolOpts {
  Global g;
  std::string a, b;
};

void run_symbol(const SymbolOpts& o) {
  const LocalField& F = base_field(o.g);
  MuM z = mtp::symbols::hilbert_m(rat_elem(F, o.a), rat_elem(F, o.b), o.g.m);
  ojson out;
  out["mu_m"] = mu_json(z);
  emit(out);
}

struct GammaOpts {
  Global g;
  std::string t, form;
};

void run_gamma(const GammaOpts& o) {
  const LocalField& F = base_field(o.g);
  AdditiveCharacter psi = make_psi(F, o.g);
  RootOfUnity v = RootOfUnity::one();
  if (!o.form.empty()) {
    mtp::qf::QuadForm q{&F, parse_scalars(F, o.form)};
    v = mtp::qf::weil_index(psi, q);
  } else {
    v = mtp::qf::gauss_gamma(psi, rat_elem(F, o.t));
  }
  ojson out;
  out["gamma"] = root_json(v);
  emit(out);
}

struct GoodOpts {
  Global g;
  std::string torus, x;
};

void run_good(const GoodOpts& o) {
  const LocalField& F = base_field(o.g);
  QuadEtale K = parse_algebra(F, o.torus);
  KElem x = parse_kelem(K, o.x);
  require_norm_one(x, "x");
  ojson out;
  out["good"] = mtp::cover::is_good(x, o.g.m);
  emit(out);
}

struct InvOpts {
  Global g;
  std::string torus, nu, c;
};

void run_inv(const InvOpts& o) {
  const LocalField& F = base_field(o.g);
  mtp::stab::TorusParam T = parse_torus(F, o.torus, o.c);
  std::vector<FieldElement> nu = parse_scalars(F, o.nu);
  if (nu.size() != T.rank())
    throw UsageError("one nu scalar per block is required");
  mtp::stab::InvClass cls = mtp::stab::inv_class(T, nu);
  ojson out;
  out["inv"] = cls.sgn;
  out["trivial"] = cls.is_trivial();
  out["kappa_plus"] = mtp::stab::kappa_plus(cls);
  out["kappa_minus"] = mtp::stab::kappa_minus(cls);
  emit(out);
}

struct CaliOpts {
  Global g;
  std::string torus, t0, nu;
};

void run_cali(const CaliOpts& o) {
  const LocalField& F = base_field(o.g);
  QuadEtale K = parse_algebra(F, o.torus);
  KElem t0 = parse_kelem(K, o.t0);
  require_norm_one(t0, "t0");
  ojson out;
  out["cali"] = mtp::stab::cali_factor(rat_elem(F, o.nu), t0, o.g.m);
  emit(out);
}

struct CadOpts {
  Global g;
  std::string torus, t0, sigma, c, gmat;
  long zeta = 0;
};

void run_cad(const CadOpts& o) {
  const LocalField& F = base_field(o.g);
  mtp::stab::TorusParam T = parse_torus(F, o.torus, o.c);
  std::vector<KElem> t0;
  {
    auto pieces = split_list(o.t0, ';');
    if (pieces.size() != T.rank())
      throw UsageError("one base point per block is required");
    for (std::size_t i = 0; i < pieces.size(); i++)
      t0.push_back(parse_kelem(T.blocks[i], pieces[i]));
  }
  std::vector<int> sigma(T.rank(), 1);
  if (!o.sigma.empty()) {
    auto pieces = split_list(o.sigma, ',');
    if (pieces.size() != T.rank())
      throw UsageError("one sector sign per block is required");
    for (std::size_t i = 0; i < pieces.size(); i++)
      sigma[i] = parse_sign(parse_ll(strip(pieces[i])), "sector sign");
  }
  std::vector<mtp::cover::GL2> g;
  for (const auto& block : split_list(o.gmat, ';')) {
    auto ent = split_list(block, ',');
    if (ent.size() != 4)
      throw UsageError("each matrix block needs four entries a,b,c,d");
    g.push_back(mtp::cover::GL2{rat_elem(F, ent[0]), rat_elem(F, ent[1]),
                                rat_elem(F, ent[2]), rat_elem(F, ent[3])});
  }
  if (g.size() != T.rank())
    throw UsageError("one matrix block per torus block is required");
  auto e = mtp::stab::CalibratedElement::make(T, t0, sigma, o.g.m);
  if (o.zeta != 0) e = e.scaled(MuM(o.g.m, o.zeta));
  auto r = mtp::stab::cad(g, e);
  ojson out;
  out["kernel"] = mu_json(r.lift.zeta);
  out["sigma"] = r.sigma;
  ojson pts = ojson::array();
  for (const auto& t : r.t0) pts.push_back(t.to_string());
  out["t0"] = pts;
  emit(out);
}

struct DeltaOpts {
  Global g;
  std::string torus, t0, c, omega;
  long long sigma = 1;
  long zeta = 0;
};

void run_delta(const DeltaOpts& o) {
  const LocalField& F = base_field(o.g);
  AdditiveCharacter psi = make_psi(F, o.g);
  QuadEtale K = parse_algebra(F, o.torus);
  mtp::stab::TorusParam T;
  T.blocks.push_back(K);
  if (!o.c.empty()) T.cprime.push_back(rat_elem(F, o.c));
  int sg = parse_sign(o.sigma, "--sigma");
  auto e = mtp::stab::CalibratedElement::make(T, {parse_kelem(K, o.t0)}, {sg},
                                              o.g.m);
  if (o.zeta != 0) e = e.scaled(MuM(o.g.m, o.zeta));
  bool have_omega = !o.omega.empty();
  ojson out;
  if (sg == 1) {
    RootOfUnity v = have_omega
                        ? mtp::transfer::delta_plus(psi, e,
                                                    parse_kelem(K, o.omega))
                        : mtp::transfer::delta_plus(psi, e);
    out["delta_plus"] = root_json(v);
  }
  if (o.g.m % 4 == 2 || sg == -1) {
    // With both factors in play the explicit omega belongs to the plus side;
    // the minus factor then uses its own canonical norm solution.
    RootOfUnity v = (have_omega && sg == -1)
                        ? mtp::transfer::delta_minus(psi, e,
                                                     parse_kelem(K, o.omega))
                        : mtp::transfer::delta_minus(psi, e);
    out["delta_minus"] = root_json(v);
  }
  emit(out);
}

struct NablaOpts {
  Global g;
  std::string gmat;
  long zeta = 0;
};

void run_nabla(const NablaOpts& o) {
  const LocalField& F = base_field(o.g);
  AdditiveCharacter psi = make_psi(F, o.g);
  auto ent = split_list(o.gmat, ',');
  if (ent.size() != 4)
    throw UsageError("--g needs four entries a,b,c,d");
  mtp::cover::GL2 g{rat_elem(F, ent[0]), rat_elem(F, ent[1]),
                    rat_elem(F, ent[2]), rat_elem(F, ent[3])};
  if (!g.det().sub(FieldElement::one(F)).is_zero_like())
    throw mtp::BadInput("the twofold character needs determinant 1");
  mtp::cover::CoverElement t{g, MuM(2, o.zeta)};
  ojson out;
  out["nabla"] = root_json(mtp::transfer::nabla_rank1(psi, t));
  emit(out);
}

struct DaggerOpts {
  Global g;
  std::string torus, y, c, gamma0;
  std::string method = "hasse";
};

mtp::packet::YParam parse_yparam(const LocalField& F, const std::string& torus,
                                 const std::string& c, const std::string& y) {
  mtp::packet::YParam Y;
  Y.T = parse_torus(F, torus, c);
  Y.yprime = parse_scalars(F, y);
  if (Y.yprime.size() != Y.rank())
    throw UsageError("one y scalar per block is required");
  if (!Y.regular()) throw mtp::BadInput("y data must be regular");
  return Y;
}

void run_dagger(const DaggerOpts& o) {
  const LocalField& F = base_field(o.g);
  mtp::packet::YParam Y = parse_yparam(F, o.torus, o.c, o.y);
  mtp::packet::TorsionPoint g0 = parse_torsion(o.gamma0, Y.rank());
  int v = 0;
  if (o.method == "hasse") {
    v = mtp::packet::dagger_char(o.g.m, Y, g0);
  } else if (o.method == "weil") {
    v = mtp::packet::dagger_char(o.g.m, Y, g0, make_psi(F, o.g));
  } else {
    throw UsageError("--method must be hasse or weil");
  }
  ojson out;
  out["dagger"] = v;
  emit(out);
}

struct InterplayOpts {
  Global g;
  std::string torus, y, c, gamma0;
};

void run_interplay(const InterplayOpts& o) {
  const LocalField& F = base_field(o.g);
  mtp::packet::YParam Y = parse_yparam(F, o.torus, o.c, o.y);
  mtp::packet::TorsionPoint g0 = parse_torsion(o.gamma0, Y.rank());
  int sp = mtp::packet::epsilon_char(mtp::packet::Side::Sp, Y, g0);
  int so = mtp::packet::epsilon_char(mtp::packet::Side::SO, Y, g0);
  int dg = mtp::packet::dagger_char(2, Y, g0);
  ojson out;
  out["epsilon_sp"] = sp;
  out["epsilon_so"] = so;
  out["dagger"] = dg;
  out["identity"] = (sp * so == dg);
  emit(out);
}

struct MmOpts {
  Global g;
  std::string torus, y, c;
  long samples = 6;
};

void run_mm(const MmOpts& o) {
  const LocalField& F = base_field(o.g);
  mtp::packet::YParam Y = parse_yparam(F, o.torus, o.c, o.y);
  mtp::qf::QuadForm q = mtp::packet::mm_space(Y);
  mtp::Rng rng = mtp::Rng::for_stream(o.g.seed, "mm-eigen");
  mtp::packet::MMReport rep =
      mtp::packet::mm_eigen_check(Y, rng, static_cast<int>(o.samples));
  ojson out;
  out["rank"] = q.rank();
  out["disc_pm"] = mtp::to_string(mtp::qf::disc_pm(q));
  out["hasse"] = mtp::qf::hasse(q);
  ojson diag = ojson::array();
  for (const auto& d : q.d) diag.push_back(d.to_string());
  out["diag"] = diag;
  ojson cy = ojson::array();
  for (const auto& cf : rep.char_y) cy.push_back(cf.to_string());
  out["char_y"] = cy;
  out["char_match"] = rep.char_match;
  out["isometry"] = rep.isometry;
  emit(out);
}

struct ProductOpts {
  std::string a, b;
};

void run_product(const ProductOpts& o) {
  Rat a = parse_rat(o.a);
  Rat b = parse_rat(o.b);
  auto rep = mtp::symbols::product_formula_check(a.num, a.den, b.num, b.den);
  ojson out;
  ojson places;
  for (const auto& [place, sgn] : rep.places) places[place] = sgn;
  out["places"] = places;
  out["product"] = rep.product;
  emit(out);
}

struct SelftestOpts {
  std::uint64_t seed = 42;
  long iters = 200;
};

void run_selftest(const SelftestOpts& o) {
  auto results = mtp::suites::run_all(o.seed, o.iters);
  ojson out;
  ojson arr = ojson::array();
  for (const auto& r : results) {
    ojson s;
    s["name"] = r.name;
    s["pass"] = r.pass;
    s["fail"] = r.fail;
    if (r.fail > 0) s["counterexample"] = r.counterexample;
    arr.push_back(s);
  }
  out["suites"] = arr;
  out["failures"] = mtp::suites::total_failures(results);
  emit(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact local-field calculator: Hilbert symbols, Weil indices, "
      "metaplectic covers, calibrated classes, transfer factors, and "
      "deterministic property self-tests."};
  app.require_subcommand(1);

  auto sym = std::make_shared<SymbolOpts>();
  {
    auto* c = app.add_subcommand("symbol", "m-th power norm-residue symbol");
    add_field_flags(c, sym->g, true);
    c->add_option("--a", sym->a, "first argument (rational literal)")
        ->required();
    c->add_option("--b", sym->b, "second argument (rational literal)")
        ->required();
    c->callback([sym] { run_symbol(*sym); });
  }

  auto gam = std::make_shared<GammaOpts>();
  {
    auto* c = app.add_subcommand(
        "gamma", "Weil index of t*x^2, or of a diagonal form with --form");
    add_field_flags(c, gam->g, false);
    add_psi_flags(c, gam->g);
    auto* t = c->add_option("--t", gam->t, "scalar coefficient");
    auto* f = c->add_option("--form", gam->form,
                            "comma list of diagonal coefficients");
    t->excludes(f);
    f->excludes(t);
    c->callback([gam] {
      if (gam->t.empty() && gam->form.empty())
        throw UsageError("gamma needs --t or --form");
      run_gamma(*gam);
    });
  }

  auto good = std::make_shared<GoodOpts>();
  {
    auto* c = app.add_subcommand(
        "good", "whether a norm-one torus element is good at degree m");
    add_field_flags(c, good->g, true);
    c->add_option("--torus", good->torus, "split, u, p, or up")->required();
    c->add_option("--x", good->x, "torus element literal")->required();
    c->callback([good] { run_good(*good); });
  }

  auto inv = std::make_shared<InvOpts>();
  {
    auto* c = app.add_subcommand(
        "inv", "stable-class invariant of a conjugacy datum, with kappa values");
    add_field_flags(c, inv->g, false);
    c->add_option("--torus", inv->torus, "comma list of block kinds")
        ->required();
    c->add_option("--nu", inv->nu, "comma list of cocycle scalars")
        ->required();
    c->add_option("--c", inv->c, "comma list of embedding scalars");
    c->callback([inv] { run_inv(*inv); });
  }

  auto cali = std::make_shared<CaliOpts>();
  {
    auto* c = app.add_subcommand(
        "cali", "calibration factor C_m(nu, t0) on one block");
    add_field_flags(c, cali->g, true);
    c->add_option("--torus", cali->torus, "split, u, p, or up")->required();
    c->add_option("--t0", cali->t0, "norm-one base point literal")->required();
    c->add_option("--nu", cali->nu, "twisting scalar (rational literal)")
        ->required();
    c->callback([cali] { run_cali(*cali); });
  }

  auto cad = std::make_shared<CadOpts>();
  {
    auto* c = app.add_subcommand(
        "cad", "calibrated adjoint action of block matrices on a lifted "
               "torus element");
    add_field_flags(c, cad->g, true);
    c->add_option("--torus", cad->torus, "comma list of block kinds")
        ->required();
    c->add_option("--t0", cad->t0, "semicolon list of base point literals")
        ->required();
    c->add_option("--sigma", cad->sigma,
                  "comma list of sector signs (default all +1)");
    c->add_option("--c", cad->c, "comma list of embedding scalars");
    c->add_option("--g", cad->gmat,
                  "semicolon list of matrix blocks, each a,b,c,d")
        ->required();
    c->add_option("--zeta", cad->zeta, "kernel exponent of the input lift");
    c->callback([cad] { run_cad(*cad); });
  }

  auto del = std::make_shared<DeltaOpts>();
  {
    auto* c = app.add_subcommand(
        "delta", "rank-one transfer factors at a calibrated base point");
    add_field_flags(c, del->g, true);
    add_psi_flags(c, del->g);
    c->add_option("--torus", del->torus, "split, u, p, or up")->required();
    c->add_option("--t0", del->t0, "norm-one base point literal")->required();
    c->add_option("--c", del->c, "embedding scalar");
    c->add_option("--sigma", del->sigma, "sector sign (default +1)");
    c->add_option("--zeta", del->zeta, "kernel exponent of the lift");
    c->add_option("--omega", del->omega,
                  "explicit norm solution for the sector base point");
    c->callback([del] { run_delta(*del); });
  }

  auto nab = std::make_shared<NablaOpts>();
  {
    auto* c = app.add_subcommand(
        "nabla", "genuine twofold-cover class function on a determinant-one "
                 "matrix");
    add_field_flags(c, nab->g, false);
    add_psi_flags(c, nab->g);
    c->add_option("--g", nab->gmat, "matrix entries a,b,c,d")->required();
    c->add_option("--zeta", nab->zeta, "kernel exponent (0 or 1)");
    c->callback([nab] { run_nabla(*nab); });
  }

  auto dag = std::make_shared<DaggerOpts>();
  {
    auto* c = app.add_subcommand(
        "dagger", "dagger character value at a 2-torsion point");
    add_field_flags(c, dag->g, false);
    add_psi_flags(c, dag->g);
    c->add_option("--torus", dag->torus,
                  "comma list of block kinds (u, p, up)")
        ->required();
    c->add_option("--y", dag->y, "comma list of eigenvalue scalars")
        ->required();
    c->add_option("--c", dag->c, "comma list of embedding scalars");
    c->add_option("--gamma0", dag->gamma0, "sign per block, e.g. +-+ or 1,-1,1")
        ->required();
    c->add_option("--method", dag->method, "hasse (default) or weil");
    c->callback([dag] { run_dagger(*dag); });
  }

  auto inter = std::make_shared<InterplayOpts>();
  {
    auto* c = app.add_subcommand(
        "interplay", "epsilon characters of both classical sides against the "
                     "twofold dagger character");
    add_field_flags(c, inter->g, false);
    c->add_option("--torus", inter->torus,
                  "comma list of block kinds (u, p, up)")
        ->required();
    c->add_option("--y", inter->y, "comma list of eigenvalue scalars")
        ->required();
    c->add_option("--c", inter->c, "comma list of embedding scalars");
    c->add_option("--gamma0", inter->gamma0, "sign per block")->required();
    c->callback([inter] { run_interplay(*inter); });
  }

  auto mm = std::make_shared<MmOpts>();
  {
    auto* c = app.add_subcommand(
        "mm", "moment-map space of a regular parameter, with eigenvalue "
              "checks");
    add_field_flags(c, mm->g, false);
    c->add_option("--torus", mm->torus, "comma list of block kinds")
        ->required();
    c->add_option("--y", mm->y, "comma list of eigenvalue scalars")
        ->required();
    c->add_option("--c", mm->c, "comma list of embedding scalars");
    c->add_option("--samples", mm->samples, "isometry sample count");
    c->add_option("--seed", mm->g.seed, "RNG seed for the sample stream");
    c->callback([mm] {
      require_min(mm->samples, 1, "--samples");
      run_mm(*mm);
    });
  }

  auto prod = std::make_shared<ProductOpts>();
  {
    auto* c = app.add_subcommand(
        "product-formula", "quadratic symbol of a rational pair at every "
                           "place, with the product");
    c->add_option("--a", prod->a, "first rational")->required();
    c->add_option("--b", prod->b, "second rational")->required();
    c->callback([prod] { run_product(*prod); });
  }

  auto self = std::make_shared<SelftestOpts>();
  {
    auto* c = app.add_subcommand(
        "selftest", "run every property suite deterministically and report "
                    "counts");
    c->add_option("--seed", self->seed, "stream seed (default 42)");
    c->add_option("--iters", self->iters,
                  "iterations per suite (default 200)");
    c->callback([self] {
      require_min(self->iters, 1, "--iters");
      run_selftest(*self);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    ojson j;
    j["error"] = e.what();
    emit(j);
    return 1;
  }
  return 0;
}
