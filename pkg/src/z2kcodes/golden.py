"""Shipped golden codes: ten extremal Type II length-32 codes over Z8.

Each record carries the generator matrix in standard form, the label of
the free source it was doubled from, the tail support of the scale-4
doubling vector, and the expected Hamming weight distribution of its
binary residue code.  golden_check re-certifies everything from scratch;
a transcription slip in the data breaks the certificate or the expected
distribution with overwhelming probability.
"""

import functools
from dataclasses import dataclass
from typing import Dict, Tuple

from .certify import certify_type_II
from .model import GeneratorMatrix, residue_code, standardize
from .rings import Z8
from .search import CandidateSet
from .weights import WeightDistribution, weight_distribution

GOLDEN_NAMES = tuple("C%d" % i for i in range(1, 11))

SOURCE_1 = "C_{8,32,1}"
SOURCE_2 = "C_{8,32,2}"

_MATRICES = [
    """10000000000000003476716356020474
       01000000000000001703275645602047
       00100000000000002574363514560204
       00010000000000010615011726731415
       00001000000000001365303604145602
       00000100000000013130517745777155
       00000010000000012611632063324043
       00000001000000011163700305167532
       00000000100000003474020675235254
       00000000010000002347402047523525
       00000000001000000234740234752352
       00000000000100013461057440750622
       00000000000010011200362013622110
       00000000000001011426617330117347
       00000000000000100100242336536347
       00000000000000022004046042646062
       00000000000000004040440000000000""",
    """10000000000000003032756356020474
       01000000000000011003437173330306
       00100000000000002574363514560204
       00010000000000003257436341456020
       00001000000000001721343604145602
       00000100000000002532574360414560
       00000010000000001657657406041456
       00000001000000010665127256332404
       00000000100000013130222123763513
       00000000010000002347402047523525
       00000000001000010770142562400611
       00000000000100012163276311123574
       00000000000010010346541764075062
       00000000000001000464634753634752
       00000000000000111142225713011734
       00000000000000020200404664264606
       00000000000000004404400000000000""",
    """10000000000000010034371733303061
       01000000000000012301250222165434
       00100000000000002574363514560204
       00010000000000003257436341456020
       00001000000000001365343604145602
       00000100000000002532574360414560
       00000010000000001213657406041456
       00000001000000011163740305167532
       00000000100000003474020675235254
       00000000010000002347402047523525
       00000000001000000234740234752352
       00000000000100002063074063475235
       00000000000010011200362013622110
       00000000000001000020634753634752
       00000000000000100100202336536347
       00000000000000022004046042646062
       00000000000000004040400000000000""",
    """10000000000000003472716356020474
       01000000000000012305210222165434
       00100000000000002574363514560204
       00010000000000003257436341456020
       00001000000000012767326261420277
       00000100000000013130517745777155
       00000010000000001217617406041456
       00000001000000000561765720604145
       00000000100000003474020675235254
       00000000010000013745425424006112
       00000000001000000234740234752352
       00000000000100002067034063475235
       00000000000010011200362013622110
       00000000000001011422617330117347
       00000000000000100104242336536347
       00000000000000022004046042646062
       00000000000000004044440000000000""",
    """10000000000000003072356356020474
       01000000000000011003437173330306
       00100000000000002574363514560204
       00010000000000013753230677104367
       00001000000000011465545132673141
       00000100000000002532574360414560
       00000010000000011313051734577715
       00000001000000000161325720604145
       00000000100000003474020675235254
       00000000010000002347402047523525
       00000000001000010730542562400611
       00000000000100012163276311123574
       00000000000010000602347436347523
       00000000000001000424234753634752
       00000000000000111102625713011734
       00000000000000020200404664264606
       00000000000000004444000000000000""",
    """10000000000000003072716356020474
       01000000000000001307275645602047
       00100000000000012270525042216543
       00010000000000003257436341456020
       00001000000000001761303604145602
       00000100000000002532574360414560
       00000010000000001617617406041456
       00000001000000010665127256332404
       00000000100000003474020675235254
       00000000010000002347402047523525
       00000000001000000234740234752352
       00000000000100002467034063475235
       00000000000010010306501764075062
       00000000000001010120036201362211
       00000000000000111102265713011734
       00000000000000020200404664264606
       00000000000000004444440000000000""",
    """10000000000000000736356436520474
       01000000000000011641650322265434
       00100000000000001274363114560204
       00010000000000013455451236631415
       00001000000000001525743364045602
       00000100000000000232574170214560
       00000010000000000553257246041456
       00000001000000002425325130604145
       00000000100000011472043462110641
       00000000010000001247402747023525
       00000000001000003034740664752352
       00000000000100000623474443275235
       00000000000010003002347646347523
       00000000000001002460234433134752
       00000000000000101440602576736347
       00000000000000022204046442046062
       00000000000000004000000440400000""",
    """10000000000000010576150634556733
       01000000000000013007437113330306
       00100000000000010630165062216543
       00010000000000013313230677104367
       00001000000000013465545112673141
       00000100000000002536574320414560
       00000010000000013313051714577715
       00000001000000011661127206332404
       00000000100000012534622173763513
       00000000010000013403204365251064
       00000000001000012370542542400611
       00000000000100011163276321123574
       00000000000010012746141744075062
       00000000000001010120036201362211
       00000000000000102402023415363475
       00000000000000022204404604264606
       00000000000000004004000000000000""",
    """10000000000000003076052565220712
       01000000000000003743645266522071
       00100000000000010566173551245033
       00010000000000003637436417665220
       00001000000000000723343601766522
       00000100000000002436374360176652
       00000010000000013075046441402411
       00000001000000000164763736601766
       00000000100000010041231556227000
       00000000010000003221702247363425
       00000000001000002762570234736342
       00000000000100002350263252546347
       00000000000010000663221746347363
       00000000000001001066322154634736
       00000000000000103546232225463473
       00000000000000020024026046066460
       00000000000000004440400000000000""",
    """10000000000000003436052125220712
       01000000000000011653420430260330
       00100000000000010204547300310546
       00010000000000003637436417665220
       00001000000000012273526053424061
       00000100000000002436374360176652
       00000010000000013153412630555124
       00000001000000012434146100347225
       00000000100000002217022573634254
       00000000010000003221702247363425
       00000000001000002322570674736342
       00000000000100002632617423473634
       00000000000010012573404550005622
       00000000000001001066322154634736
       00000000000000111016015037121732
       00000000000000020620046064204606
       00000000000000004000400440000000""",
]

_SOURCES = (SOURCE_1,) * 8 + (SOURCE_2,) * 2

_SUPPORTS = (
    (17, 19, 21, 22),
    (17, 18, 20, 21),
    (17, 19, 21),
    (17, 19, 20, 21, 22),
    (17, 18, 19, 20),
    (17, 18, 19, 20, 21, 22),
    (18, 24, 25, 27),
    (20, 25),
    (17, 18, 19, 21),
    (17, 21, 24, 25),
)

# Hamming weight -> codeword count of each binary residue code; rows sum
# to 2^15 and are pairwise distinct, which is what makes them usable as
# classification labels for the ten codes.
_DISTRIBUTIONS = (
    {0: 1, 8: 316, 12: 6912, 16: 18310, 20: 6912, 24: 316, 32: 1},
    {0: 1, 8: 332, 12: 6848, 16: 18406, 20: 6848, 24: 332, 32: 1},
    {0: 1, 8: 337, 12: 6888, 16: 18259, 20: 7000, 24: 283},
    {0: 1, 8: 305, 12: 6952, 16: 18259, 20: 6936, 24: 315},
    {0: 1, 8: 308, 12: 6944, 16: 18262, 20: 6944, 24: 308, 32: 1},
    {0: 1, 8: 300, 12: 6976, 16: 18214, 20: 6976, 24: 300, 32: 1},
    {0: 1, 8: 364, 12: 6720, 16: 18598, 20: 6720, 24: 364, 32: 1},
    {0: 1, 8: 380, 12: 7168, 16: 17670, 20: 7168, 24: 380, 32: 1},
    {0: 1, 8: 324, 12: 6880, 16: 18358, 20: 6880, 24: 324, 32: 1},
    {0: 1, 8: 340, 12: 6816, 16: 18454, 20: 6816, 24: 340, 32: 1},
)


@dataclass(frozen=True)
class GoldenRecord:
    """One shipped code plus everything needed to re-certify it."""

    name: str
    matrix: GeneratorMatrix
    source: str
    s4: CandidateSet
    expected_distribution: WeightDistribution


def _parse_matrix(text: str) -> GeneratorMatrix:
    rows = [[int(c) for c in line.strip()] for line in text.split()]
    return GeneratorMatrix(Z8, rows)


@functools.lru_cache(maxsize=None)
def golden_records() -> Tuple[GoldenRecord, ...]:
    return tuple(
        GoldenRecord(
            name=name,
            matrix=_parse_matrix(mat),
            source=src,
            s4=CandidateSet(supp),
            expected_distribution=WeightDistribution("hamming", dict(dist)),
        )
        for name, mat, src, supp, dist in zip(
            GOLDEN_NAMES, _MATRICES, _SOURCES, _SUPPORTS, _DISTRIBUTIONS))


def golden_record(name: str) -> GoldenRecord:
    for rec in golden_records():
        if rec.name == name:
            return rec
    raise KeyError("no golden code named %r" % name)


def _check_one(rec: GoldenRecord) -> Dict[str, object]:
    sf = standardize(rec.matrix)
    cert = certify_type_II(sf)
    binary = residue_code(sf, 1)
    dist = weight_distribution(binary, kind="hamming")
    nonzero = sorted(w for w, c in dist.counts.items() if w > 0 and c > 0)
    checks = {
        "type_ii": cert.valid and cert.is_type_ii,
        "profile": sf.profile.ks == (15, 1, 1),
        "residue_dimension": binary.size() == 2 ** 15,
        "distribution": dist.counts == rec.expected_distribution.counts,
        "min_residue_weight": bool(nonzero) and nonzero[0] == 8,
    }
    return {
        "name": rec.name,
        "source": rec.source,
        "s4": list(rec.s4.sorted()),
        "checks": checks,
        "distribution": {str(w): dist.counts[w] for w in sorted(dist.counts)},
        "ok": all(checks.values()),
    }


def golden_check() -> Dict[str, object]:
    """Re-certify every shipped code; any mismatch is a named failure."""
    codes = [_check_one(rec) for rec in golden_records()]
    dists = [tuple(sorted(rec.expected_distribution.counts.items()))
             for rec in golden_records()]
    distinct = len(set(dists)) == len(dists)
    return {
        "codes": codes,
        "distinct_distributions": distinct,
        "ok": distinct and all(c["ok"] for c in codes),
    }
