#include <benchmark/benchmark.h>

#include "lw/holo.hpp"
#include "lw/oneform.hpp"
#include "lw/riccati.hpp"
#include "lw/verify.hpp"
#include "lw/weierstrass.hpp"

namespace {

using lw::Complex;
using lw::Expr;
using lw::Field;

lw::Domain square(double h) {
  lw::Domain d;
  d.rect = {-h, h, -h, h};
  return d;
}

// Closed-form Bryant pair with x = e^w, y = -e^w.
lw::BryantPair catenoid_pair() {
  const Expr W = Expr::w(), WB = Expr::conj_w();
  const Expr u = Expr(0.5) * (W + WB), v = Expr(Complex(0.0, -0.5)) * (W - WB);
  return {Field(exp(W)), Field(-exp(W)), Field(Expr(0.5) * exp(v - u)), Field(Expr(0.5) * exp(-u - v))};
}

void BM_ParseExpr(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lw::parse("w*(conj(w)^3 - 8)/(3*(conj(w)^3*w^3 - 2)) + log(w)"));
}
BENCHMARK(BM_ParseExpr);

void BM_FieldJet(benchmark::State& st) {
  const Field f(lw::parse("w*(conj(w)^3*w^3 - 8)/(3*(conj(w)^3*w^3 - 2))"));
  const Complex w(0.7, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(f.jet(w));
}
BENCHMARK(BM_FieldJet);

void BM_IntegrateFrom(benchmark::State& st) {
  const Field f(lw::parse("exp(w)*w^2"));
  const auto d = square(1.0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        lw::integrate_from<Complex>([&](Complex z) { return f.value(z); }, {0.0, 0.0}, {0.8, 0.6}, d));
  }
}
BENCHMARK(BM_IntegrateFrom);

void BM_BuildSurface(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto d = square(0.4);
  const Expr WB = Expr::conj_w();
  lw::MuOptions mo;
  mo.grid = {d.rect, n, n};
  const auto mu = lw::solve_mu(Field(WB), Field(-WB), d, mo).mu;
  for (auto _ : st) benchmark::DoNotOptimize(lw::build_surface(Field(WB), Field(-WB), mu, d, mo.grid));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_BuildSurface)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_NumericMu(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  lw::Domain d;
  d.rect = {0.2, 0.6, -0.2, 0.2};
  lw::MuOptions mo;
  mo.grid = {d.rect, n, n};
  mo.w0 = d.rect.center();
  const Expr W = Expr::w(), WB = Expr::conj_w();
  for (auto _ : st) benchmark::DoNotOptimize(lw::solve_mu(Field(W), Field(WB), d, mo));
}
BENCHMARK(BM_NumericMu)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_CatenoidVerify(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto d = square(1.0);
  const auto pair = catenoid_pair();
  for (auto _ : st) {
    auto out = lw::bryant_from_pair(pair, d, {d.rect, n, n});
    benchmark::DoNotOptimize(lw::gauss_curvature(out.h));
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_CatenoidVerify)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_FdJets(benchmark::State& st) {
  const auto d = square(1.0);
  auto g = lw::sample_surface(lw::bryant_surface(catenoid_pair()), {d.rect, 101, 101}, lw::Provenance::Analytic);
  for (auto _ : st) {
    lw::compute_fd_jets(g);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_FdJets)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& st) {
  const auto d = square(0.5);
  const auto F = lw::sample_surface(lw::bryant_surface(catenoid_pair()), {d.rect, 81, 81}, lw::Provenance::Analytic);
  lw::RiccatiProblem p;
  p.a = Expr(Complex(0.0, 1.0)) * exp(Expr::w());
  p.P = Expr(Complex(0.0, 0.5)) * exp(-Expr::w());
  p.domain = d;
  for (auto _ : st) {
    auto g = F;
    benchmark::DoNotOptimize(lw::reconstruct_bryant(g, {p, std::nullopt}));
  }
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
