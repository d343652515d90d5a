"""Regenerate the bundled fixture files in src/essurf/data.

    python3 tools/make_fixtures.py [SEARCH_DIR]

The small closed triangulations come from an exhaustive gluing search whose
output files are named in SEARCHED; without SEARCH_DIR the bundled copies
are kept.  Everything else is rebuilt from constructions and iso-sigs.
"""

import sys
from pathlib import Path

from essurf import fixtures
from essurf.triangulation import Triangulation, read_gluings

# small closed triangulations found by an exhaustive search over gluings
SEARCHED = {
    "s3": "closed1_1_b0_t0_v1.tri",
    "l4_1": "closed1_2_b0_t4_v1.tri",
    "l5_2": "closed1_3_b0_t5_v1.tri",
    "l3_1": "closed2_10_b0_t3_v1.tri",
    "lens7": "closed2_8_b0_t7_v1.tri",
    "lens8": "closed2_9_b0_t8_v1.tri",
    "s2xs1": "closed2_11_b1_t0_v1.tri",
}


def main(search_dir=None):
    out = Path(__file__).resolve().parent.parent / "src" / "essurf" / "data"
    out.mkdir(exist_ok=True)
    tris = {}
    for name, fname in SEARCHED.items():
        src = Path(search_dir) / fname if search_dir else out / f"{name}.tri"
        tris[name] = read_gluings(src)
    for name in fixtures.ISO_SIGS:
        tris[name] = fixtures.from_iso_sig(name)
    tris["t3"] = fixtures.three_torus()
    tris["gieseking"] = fixtures.gieseking()
    tris["ball"] = Triangulation.single_tetrahedron()
    tris["solid_torus"] = fixtures.solid_torus()
    tris["solid_torus_2v"] = fixtures.solid_torus_two_vertices()
    for name, tri in sorted(tris.items()):
        header = f"# {fixtures.DESCRIPTIONS[name]}\n"
        (out / f"{name}.tri").write_text(header + tri.to_text())
        print(name, tri.size)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
