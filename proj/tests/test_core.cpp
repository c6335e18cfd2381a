#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mmdiff/core/config.hpp"
#include "mmdiff/core/corrupt.hpp"
#include "mmdiff/core/error.hpp"
#include "mmdiff/core/parallel.hpp"
#include "mmdiff/core/protein.hpp"
#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/schedule.hpp"

using namespace mmdiff;

TEST_CASE("noise step sequence endpoints and shape") {
  NoiseSchedule sched;  // defaults: 160 / 0.0004 / rho 7 / 200 steps
  const std::vector<double> c = noise_steps(sched);
  REQUIRE(c.size() == 201);
  CHECK(c.front() == 160.0);
  CHECK(c.back() <= 0.0004);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] < c[i - 1]);
}

TEST_CASE("noise step sequence degenerate constant case") {
  NoiseSchedule sched;
  sched.sigma_max = 1.0;
  sched.sigma_min = 1.0;
  sched.n_steps = 1;
  const std::vector<double> c = noise_steps(sched);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 1.0);
}

TEST_CASE("noise step midpoint matches direct power interpolation") {
  NoiseSchedule sched;
  const std::vector<double> c = noise_steps(sched);
  const double inv_rho = 1.0 / sched.rho;
  const double lo = std::pow(sched.sigma_min, inv_rho);
  const double hi = std::pow(sched.sigma_max, inv_rho);
  const double expected = std::pow(hi + (100.0 / 200.0) * (lo - hi), sched.rho);
  CHECK(c[100] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noise step sequence validates configuration") {
  NoiseSchedule sched;
  sched.n_steps = 0;
  CHECK_THROWS_AS(noise_steps(sched), ConfigError);
  sched = NoiseSchedule{};
  sched.sigma_min = -1.0;
  CHECK_THROWS_AS(noise_steps(sched), ConfigError);
  sched = NoiseSchedule{};
  sched.sigma_max = 0.0001;  // below sigma_min
  CHECK_THROWS_AS(noise_steps(sched), ConfigError);
}

TEST_CASE("noise step sequence is bit-reproducible") {
  NoiseSchedule sched;
  CHECK(noise_steps(sched) == noise_steps(sched));
}

TEST_CASE("mask survival fraction values") {
  const MaskSchedule lin = MaskSchedule::linear();
  const MaskSchedule pow15 = MaskSchedule::power(1.5);
  CHECK(alpha(lin, 0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(alpha(pow15, 1.0) == 0.0);
  CHECK(alpha(pow15, 0.5) ==
        doctest::Approx(1.0 - std::pow(0.5, 1.5)).epsilon(1e-15));
  CHECK(alpha(lin, 0.0) == 1.0);
  CHECK(alpha(lin, 1.0) == 0.0);
  CHECK(alpha(pow15, 0.0) == 1.0);
}

TEST_CASE("mask survival fraction rejects out-of-range times") {
  const MaskSchedule lin = MaskSchedule::linear();
  CHECK_THROWS_AS(alpha(lin, -0.01), DomainError);
  CHECK_THROWS_AS(alpha(lin, 1.01), DomainError);
}

TEST_CASE("mask survival fraction is monotone non-increasing") {
  for (const MaskSchedule sched :
       {MaskSchedule::linear(), MaskSchedule::power(1.5)}) {
    double prev = alpha(sched, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = alpha(sched, i / 1000.0);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("mask survival derivative matches finite differences") {
  const double h = 1e-6;
  for (const MaskSchedule sched :
       {MaskSchedule::linear(), MaskSchedule::power(1.5)}) {
    for (double r : {0.2, 0.5, 0.9}) {
      const double fd = (alpha(sched, r + h) - alpha(sched, r - h)) / (2 * h);
      CHECK(alpha_derivative(sched, r) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("discrete corruption boundaries") {
  const Vocabulary vocab{4};
  const MaskSchedule lin = MaskSchedule::linear();
  SequenceState x0;
  x0.tokens = {0, 1, 2, 3, 0, 1};
  Rng rng(7);
  const SequenceState all = corrupt_discrete(x0, 1.0, vocab, lin, rng);
  for (int t : all.tokens) CHECK(t == vocab.mask_id());
  const SequenceState none = corrupt_discrete(x0, 0.0, vocab, lin, rng);
  CHECK(none.tokens == x0.tokens);
}

TEST_CASE("discrete corruption hits the binomial mask fraction") {
  const Vocabulary vocab{4};
  const MaskSchedule lin = MaskSchedule::linear();
  SequenceState x0;
  x0.tokens.assign(10000, 2);
  Rng rng(11);
  const SequenceState xr = corrupt_discrete(x0, 0.3, vocab, lin, rng);
  const double frac = mask_fraction(xr, vocab);
  CHECK(frac == doctest::Approx(0.30).epsilon(0.02 / 0.30));
}

TEST_CASE("discrete corruption never unmasks") {
  const Vocabulary vocab{4};
  const MaskSchedule lin = MaskSchedule::linear();
  SequenceState x;
  x.tokens = {0, vocab.mask_id(), 2, vocab.mask_id()};
  Rng rng(3);
  const SequenceState y = corrupt_discrete(x, 0.5, vocab, lin, rng);
  CHECK(y.tokens[1] == vocab.mask_id());
  CHECK(y.tokens[3] == vocab.mask_id());
}

TEST_CASE("bridge corruption matches the fresh-corruption marginal") {
  const Vocabulary vocab{4};
  const MaskSchedule lin = MaskSchedule::linear();
  SequenceState x0;
  x0.tokens.assign(20000, 1);
  Rng rng(5);
  const SequenceState xa = corrupt_discrete(x0, 0.3, vocab, lin, rng);
  const SequenceState xb = corrupt_discrete_bridge(xa, 0.3, 0.7, vocab, lin, rng);
  // Composition of survival fractions: alpha(0.3) * alpha(0.7)/alpha(0.3).
  CHECK(mask_fraction(xb, vocab) == doctest::Approx(0.7).epsilon(0.02));
  for (std::size_t i = 0; i < xa.tokens.size(); ++i)
    if (vocab.is_mask(xa.tokens[i])) CHECK(vocab.is_mask(xb.tokens[i]));
  CHECK_THROWS_AS(corrupt_discrete_bridge(xa, 0.7, 0.3, vocab, lin, rng),
                  DomainError);
}

TEST_CASE("continuous corruption identity, variance, and mean") {
  ContinuousState x0;
  x0.mode = CoordMode::Toy;

  SUBCASE("t = 0 is the identity") {
    x0.coords = Vec::LinSpaced(5, -1.0, 1.0);
    Rng rng(1);
    const ContinuousState y = corrupt_continuous(x0, 0.0, rng);
    CHECK((y.coords - x0.coords).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("variance of t * noise") {
    x0.coords = Vec::Zero(100000);
    Rng rng(2);
    const ContinuousState y = corrupt_continuous(x0, 2.0, rng);
    const double var = y.coords.squaredNorm() / y.coords.size();
    CHECK(var == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  }

  SUBCASE("mean is preserved") {
    x0.coords = Vec::Constant(100000, 5.0);
    Rng rng(3);
    const ContinuousState y = corrupt_continuous(x0, 1.0, rng);
    CHECK(y.coords.mean() == doctest::Approx(5.0).epsilon(0.02 / 5.0));
  }

  SUBCASE("negative noise level rejected") {
    x0.coords = Vec::Zero(3);
    Rng rng(4);
    CHECK_THROWS_AS(corrupt_continuous(x0, -1.0, rng), DomainError);
  }

  SUBCASE("same seed, same draw") {
    x0.coords = Vec::Zero(64);
    Rng a(9), b(9);
    const ContinuousState ya = corrupt_continuous(x0, 1.5, a);
    const ContinuousState yb = corrupt_continuous(x0, 1.5, b);
    CHECK((ya.coords - yb.coords).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("rng basics") {
  Rng rng(42);
  SUBCASE("uniform stays in [0,1)") {
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }
  SUBCASE("normal moments") {
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double z = rng.normal();
      s += z;
      s2 += z * z;
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("integer bound respected") {
    for (int i = 0; i < 1000; ++i) CHECK(rng.integer(7) < 7);
  }
  SUBCASE("categorical frequencies follow weights") {
    Vec w(3);
    w << 1.0, 2.0, 1.0;
    int counts[3] = {0, 0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.categorical(w)];
    CHECK(counts[1] / static_cast<double>(n) == doctest::Approx(0.5).epsilon(0.03));
  }
  SUBCASE("categorical rejects all-zero weights") {
    Vec w = Vec::Zero(3);
    CHECK_THROWS_AS(rng.categorical(w), DegenerateError);
  }
  SUBCASE("sampling without replacement gives distinct in-range picks") {
    const std::vector<int> picks = rng.sample_without_replacement(10, 4);
    CHECK(picks.size() == 4);
    std::set<int> uniq(picks.begin(), picks.end());
    CHECK(uniq.size() == 4);
    for (int p : picks) {
      CHECK(p >= 0);
      CHECK(p < 10);
    }
  }
}

TEST_CASE("rng streams are deterministic and decorrelated") {
  Rng base(123);
  Rng s0 = base.stream(0);
  Rng s1 = base.stream(1);
  Rng base2(123);
  Rng s0b = base2.stream(0);
  for (int i = 0; i < 100; ++i) {
    const double a = s0.uniform();
    CHECK(a == s0b.uniform());
    CHECK(a != s1.uniform());
  }
}

TEST_CASE("time coupling endpoints and monotonicity") {
  NoiseSchedule sched;
  const TimeCoupling tc = make_time_coupling(sched);
  REQUIRE(tc.n_steps() == 200);
  CHECK(tc.t.front() == 160.0);
  CHECK(tc.r.front() == 1.0);
  CHECK(tc.t.back() <= 0.0004);
  CHECK(tc.r.back() == 0.0);
  CHECK(tc.tau.front() == 0.0);
  CHECK(tc.tau.back() == 1.0);
  for (std::size_t i = 1; i < tc.t.size(); ++i) {
    CHECK(tc.t[i] < tc.t[i - 1]);
    CHECK(tc.r[i] < tc.r[i - 1]);
    CHECK(tc.tau[i] > tc.tau[i - 1]);
  }
}

TEST_CASE("config parses sections, comments, and typed values") {
  const std::string text =
      "# sampler settings\n"
      "[sampler]\n"
      "sigma_max = 160.0   # exploding scale\n"
      "n_steps = 200\n"
      "mask_schedule = linear\n"
      "churn = true\n"
      "\n"
      "[steering]\n"
      "beta = -0.5\n";
  const Config cfg = Config::parse(text);
  CHECK(cfg.get_double("sampler", "sigma_max") == 160.0);
  CHECK(cfg.get_int("sampler", "n_steps") == 200);
  CHECK(cfg.get_string("sampler", "mask_schedule") == "linear");
  CHECK(cfg.get_bool("sampler", "churn"));
  CHECK(cfg.get_double("steering", "beta") == -0.5);
  CHECK(cfg.get_double_or("steering", "missing", 1.5) == 1.5);
  CHECK(!cfg.has("sampler", "missing"));
  CHECK_THROWS_AS(cfg.get_double("sampler", "mask_schedule"), ConfigError);
  CHECK_THROWS_AS(cfg.get_string("nope", "x"), ConfigError);
}

TEST_CASE("config round-trips through text") {
  Config cfg;
  cfg.set("a", "x", 1.5);
  cfg.set("a", "y", std::int64_t{7});
  cfg.set("b", "name", std::string("value"));
  const Config back = Config::parse(cfg.str());
  CHECK(back.get_double("a", "x") == 1.5);
  CHECK(back.get_int("a", "y") == 7);
  CHECK(back.get_string("b", "name") == "value");
  CHECK(back.str() == cfg.str());
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(Config::parse("[sec\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[s]\nnovalue\n"), ConfigError);
}

TEST_CASE("six-significant-digit formatting") {
  CHECK(format_sig6(160.0) == "160");
  CHECK(format_sig6(0.123456789) == "0.123457");
  CHECK(format_sig6(1234567.0) == "1.23457e+06");
  CHECK(format_sig6(-0.5) == "-0.5");
}

TEST_CASE("chunked parallel map covers every index exactly once") {
  const std::int64_t n = 1003;
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  parallel_for_chunks(n, 16, [&](std::int64_t b, std::int64_t e, int) {
    for (std::int64_t i = b; i < e; ++i) ++hits[static_cast<std::size_t>(i)];
  });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("chunk boundaries are independent of thread availability") {
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges(8);
  parallel_for_chunks(100, 8, [&](std::int64_t b, std::int64_t e, int c) {
    ranges[static_cast<std::size_t>(c)] = {b, e};
  });
  CHECK(ranges.front().first == 0);
  CHECK(ranges.back().second == 100);
  for (int c = 1; c < 8; ++c)
    CHECK(ranges[static_cast<std::size_t>(c)].first ==
          ranges[static_cast<std::size_t>(c - 1)].second);
}

TEST_CASE("residue token tables") {
  using namespace mmdiff::protein;
  CHECK(vocabulary().size == 21);
  CHECK(vocabulary().mask_id() == 21);
  CHECK(token_from_three("ALA") == 0);
  CHECK(token_from_three("VAL") == 19);
  CHECK(token_from_three("XYZ") == kUnknownToken);
  for (int t = 0; t < kNumStandard; ++t) {
    CHECK(token_from_three(three_from_token(t)) == t);
    CHECK(token_from_one(one_from_token(t)) == t);
  }
  CHECK(chem_class(token_from_three("GLY")) == ChemClass::Special);
  CHECK(chem_class(token_from_three("ARG")) == ChemClass::Positive);
  CHECK(chem_class(token_from_three("ASP")) == ChemClass::Negative);
  CHECK(chem_class(token_from_three("SER")) == ChemClass::Polar);
  CHECK(chem_class(token_from_three("LEU")) == ChemClass::Hydrophobic);
}

TEST_CASE("residue charge and composition helpers") {
  using namespace mmdiff::protein;
  const int R = token_from_one('R'), K = token_from_one('K'),
            E = token_from_one('E'), G = token_from_one('G'),
            H = token_from_one('H');
  std::vector<int> seq(10, R);
  seq.insert(seq.end(), 4, E);
  CHECK(net_charge(seq) == 6);
  CHECK(net_charge(std::vector<int>(16, K)) == 16);
  CHECK(net_charge(std::vector<int>(30, G)) == 0);
  CHECK(formal_charge(H) == 0);

  std::vector<int> tagged(3, G);
  tagged.insert(tagged.end(), 5, H);
  tagged.push_back(G);
  CHECK(has_his_run(tagged));
  std::vector<int> short_run(3, G);
  short_run.insert(short_run.end(), 4, H);
  CHECK(!has_his_run(short_run));

  CHECK(is_cation(R));
  CHECK(!is_cation(H));
  CHECK(is_aromatic(H));
  CHECK(is_aromatic(token_from_one('F')));
  CHECK(is_hydrophobic(token_from_one('P')));
  CHECK(!is_hydrophobic(G));
  CHECK(is_cysteine(token_from_one('C')));
}

TEST_CASE("entropy ceiling uses twenty standard residues") {
  CHECK(mmdiff::protein::entropy_max() ==
        doctest::Approx(std::log(20.0)).epsilon(1e-15));
}
