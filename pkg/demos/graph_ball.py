"""Ball of radius 2 in the vertex-lattice graph at p = 3, written as DOT."""
import sys
from collections import Counter

from rzgl4.graph import build_graph, to_dot
from rzgl4.qspace import make_fixed_space

fs = make_fixed_space(3, 12)
g = build_graph(fs, fs.seed_type2(), 2)
types = Counter(v.type for v, _ in g.nodes.values())
print(f"{len(g.nodes)} nodes ({types[4]} components, {types[2]} points), {len(g.edges)} edges",
      file=sys.stderr)
print(f"bipartite={g.is_bipartite()} connected={g.is_connected()}", file=sys.stderr)
sys.stdout.write(to_dot(g))
