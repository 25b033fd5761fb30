"""Write Gray-ordered energy projections and embedded overlays as CSV files."""
import argparse
from pathlib import Path

from qlinsolve.anneal import chimera_for
from qlinsolve.chimera import embed_complete_graph
from qlinsolve.fixtures import FIXTURES, get_fixture
from qlinsolve.landscape import compare_embedded_landscape, degeneracy_report, gray_projection
from qlinsolve.linear_system import build_linear_qubo

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("landscapes"))
    ap.add_argument("--alpha", type=float, default=20.0)
    ap.add_argument("--fraction", type=float, default=0.05, help="near-ground window as a share of the range")
    ap.add_argument("names", nargs="*", default=sorted(FIXTURES))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    print("fixture,states,ground,gap,window,near_ground")
    for name in args.names:
        model = build_linear_qubo(get_fixture(name).problem())
        gray_projection(model).to_csv(args.out / f"{name}.csv")
        rep = degeneracy_report(model, fraction=args.fraction)
        print(f"{name},{1 << model.num_vars},{rep.ground_energy:.6g},{rep.gap:.6g},{rep.delta:.6g},{rep.count}")
        if model.num_vars <= 8:
            g = chimera_for(model.num_vars)
            overlay = compare_embedded_landscape(model, embed_complete_graph(model.num_vars, g), g, args.alpha)
            overlay.to_csv(args.out / f"{name}_overlay.csv")
