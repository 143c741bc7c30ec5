"""Connected graphs on at most 7 vertices with independence and Lovász numbers.

Graphs come from the networkx atlas; alpha from a maximum clique of the
complement; theta from cvxpy (Clarabel). Output: one tab-separated line per
graph, `n  edges  alpha  theta`, edges written as `i-j` joined by commas.
"""

import sys

import cvxpy as cp
import networkx as nx
import numpy as np


def theta(g):
    n = g.number_of_nodes()
    x = cp.Variable((n, n), symmetric=True)
    cons = [x >> 0, cp.trace(x) == 1] + [x[i, j] == 0 for i, j in g.edges()]
    prob = cp.Problem(cp.Maximize(cp.sum(x)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    return prob.value


def alpha(g):
    return max(len(c) for c in nx.find_cliques(nx.complement(g)))


def main(out):
    with open(out, "w") as f:
        f.write("# n\tedges\talpha\ttheta\n")
        for g in nx.graph_atlas_g():
            n = g.number_of_nodes()
            if n == 0 or not nx.is_connected(g):
                continue
            edges = ",".join(f"{min(e)}-{max(e)}" for e in sorted(g.edges()))
            t = 1.0 if n == 1 else theta(g)
            f.write(f"{n}\t{edges}\t{alpha(g)}\t{t:.10f}\n")


if __name__ == "__main__":
    np.set_printoptions(precision=12)
    main(sys.argv[1] if len(sys.argv) > 1 else "data/connected_graphs_le7.tsv")
