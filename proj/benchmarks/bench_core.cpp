#include <smtlab/family.hpp>
#include <smtlab/groebner.hpp>
#include <smtlab/heights.hpp>
#include <smtlab/hilbert.hpp>
#include <smtlab/nevanlinna.hpp>

#include <benchmark/benchmark.h>

using namespace smtlab;

namespace
{

Ideal twisted_cubic()
{
    return Ideal(4, {parse_poly("x0*x2 - x1^2", 4), parse_poly("x0*x3 - x1*x2", 4), parse_poly("x1*x3 - x2^2", 4)});
}

std::vector<Poly> lines(std::size_t n, int q)
{
    std::vector<Poly> out;
    for (int i = 0; i < q; ++i) {
        Poly p(n);
        for (std::size_t j = 0; j < n; ++j) {
            p.add_term(Monomial::variable(n, j), make_rational(((i + 1) * (static_cast<int>(j) + 2)) % 7 - 3));
        }
        out.push_back(p);
    }
    return out;
}

void BM_GroebnerThreeQuadrics(benchmark::State &state)
{
    const std::vector<Poly> g{parse_poly("x0*x1 - x2*x3", 4), parse_poly("x0^2 + x1^2 - x2^2 - 2*x3^2", 4),
                              parse_poly("x0*x3 + x1*x2 - x3^2", 4)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(groebner_basis(Ideal(4, g), TermOrder::grevlex()));
    }
}
BENCHMARK(BM_GroebnerThreeQuadrics);

void BM_HilbertFunction(benchmark::State &state)
{
    const Ideal I = twisted_cubic();
    for (auto _ : state) {
        benchmark::DoNotOptimize(hilbert_function(I, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_HilbertFunction)->Arg(4)->Arg(16);

void BM_DistributiveConstant(benchmark::State &state)
{
    const Variety V = Variety::projective_space(3);
    const auto q = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const FamilyGeometry G(V, HypersurfaceFamily(V, lines(4, q)));
        benchmark::DoNotOptimize(G.distributive_constant());
    }
}
BENCHMARK(BM_DistributiveConstant)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HilbertWeight(benchmark::State &state)
{
    const Ideal I = twisted_cubic();
    const WeightVector c = WeightVector::parse("3,1,2,0");
    for (auto _ : state) {
        benchmark::DoNotOptimize(hilbert_weight(I, static_cast<int>(state.range(0)), c));
    }
}
BENCHMARK(BM_HilbertWeight)->Arg(4)->Arg(8);

void BM_CountZerosExponential(benchmark::State &state)
{
    const ExpPoly phi = parse_exppoly("exp(2*z) - 3*exp(z) + 1");
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_zeros(phi, Region::disc(t)));
    }
}
BENCHMARK(BM_CountZerosExponential)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CharacteristicT(benchmark::State &state)
{
    const CurveSpec c({parse_exppoly("1"), parse_exppoly("exp(z)"), parse_exppoly("exp(2*z)")}, Domain::plane());
    for (auto _ : state) {
        benchmark::DoNotOptimize(characteristic_T(c, 20.0));
    }
}
BENCHMARK(BM_CharacteristicT);

void BM_WeilFunction(benchmark::State &state)
{
    const IntegerForm Q(parse_poly("3*x0^2 - 5*x1*x2 + 7*x2^2", 3));
    const RationalPoint x = RationalPoint::parse("(123456:-789:1000003)");
    for (auto _ : state) {
        benchmark::DoNotOptimize(weil_function(Q, Place::prime(3), x));
    }
}
BENCHMARK(BM_WeilFunction);

} // namespace

BENCHMARK_MAIN();
