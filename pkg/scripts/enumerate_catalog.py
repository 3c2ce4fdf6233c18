"""Print the enumerated catalogs: small lattices, frames, quantales and their invariants."""
import argparse

from pointfree.catalog import distributive_lattices, lattices, quantale_catalog
from pointfree.lattice import birkhoff, points
from pointfree.poset import enumerate_posets
from pointfree.quantale import cidem, cidem_lattice, idem
from pointfree.sheaves import subterminal_frame
from pointfree.workspace import cover_pairs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    n = args.max_size

    print("posets up to iso:", [len(enumerate_posets(k)) for k in range(1, min(n, 5) + 1)])
    print("lattices by size:", [sum(L.n == k for L in lattices(min(n, 5))) for k in range(1, min(n, 5) + 1)])
    print()
    print(f"{'frame':<8}{'size':>5}{'points':>8}{'irred':>7}{'subterm':>9}  covers")
    for k, F in enumerate(distributive_lattices(n)):
        J = birkhoff(F).irreducibles
        sub = len(subterminal_frame(F).sheaves) if F.n <= 5 else "-"
        covers = " ".join(f"{a}<{b}" for a, b in cover_pairs(F.carrier))
        print(f"DL{k:<6}{F.n:>5}{len(points(F)):>8}{J.n:>7}{sub!s:>9}  {covers}")
    print()
    print(f"{'quantale':<12}{'size':>5}  {'flags':<6}{'cIdem':<32}Idem")
    for name, Q in quantale_catalog(args.seed).items():
        flags = "all" if Q.fully_flagged else "some" if Q.has_finite_joins else "none"
        c = ",".join(cidem(Q).members)
        if Q.fully_flagged:
            c += f" ({cidem_lattice(Q).n}-frame)"
        print(f"{name:<12}{Q.n:>5}  {flags:<6}{c:<32}{','.join(idem(Q).members)}")


if __name__ == "__main__":
    main()
