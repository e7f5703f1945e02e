"""From a hyperelliptic curve to a census of quadratic fields with large
class group rank."""

from hilbquad.census import decade_checkpoints, field_census, growth_fit, s_k_series
from hilbquad.forms import BinaryForm
from hilbquad.specialize import catalog_curve, enumerate_specializations

C = catalog_curve("chyp2", m=2, c=2)
print("pre-model:", C.pre_model, " odd model:", C.f)
stream = enumerate_specializations(C, [2, 3], -1, 600)
print(f"shift N = {stream.N}, modulus M = {stream.M}, {len(stream)} candidates")
for rec in stream.take(4):
    print(f"   x0 = {str(rec.x0):>8}  t = {rec.t:>14}  d = {rec.d_field}")
print()

fc = field_census(C, -1, 10**8, 2, 2, 43 * 600, S=[2, 3])
print("fields with 2-rank >= 2 and |d| <= X:")
for x, n in fc.series.checkpoints:
    print(f"   X = {x:>10}  {n}")
print(f"refuted fraction {fc.refuted_fraction:.3f}")
print()

F = BinaryForm((1, 0, 0, 1, 0))
series = s_k_series(F, [10**3, 10**4, 10**5, 10**6], 2)
fit = growth_fit(series, 0.5, 2)
print("squarefree cores of X^3 Y + Y^4:", series.counts)
print(f"log-log slope {fit.slope:.3f} (expected 1/2), constant {fit.constant:.2f}")

C3 = catalog_curve("chyp2", m=3)
fc3 = field_census(C3, -1, 10**9, 3, 2, 400, S=[], checkpoints=decade_checkpoints(10**5, 10**9, 2))
fit3 = growth_fit(fc3.series, 1 / 3, 2)
print(f"3-rank >= 2 census from the genus 2 member: {fc3.series.counts}, slope {fit3.slope:.3f}")
