"""Neighbour graphs of same-colour cubes and their rooted trees."""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from ..errors import VerificationError
from ..geometry import Point, RectilinearRegion
from .colored_cover import ColoredCubeSet, PlacedCube
from .lattice_cover import build_cover
from .world import ChartComplex


def build_neighbour_graph(
    world: ChartComplex,
    cubes: ColoredCubeSet,
    chart: int,
    color: int,
    forbidden: Optional[RectilinearRegion] = None,
    members: Optional[Sequence[PlacedCube]] = None,
) -> nx.Graph:
    """
    Graph on the cubes of one chart and colour joining m-neighbours.

    Two cubes are m-neighbours when they differ by d * period_m along axis
    m. The edge is kept when the hull of the pair lies in the chart and
    misses the forbidden region.

    Args:
        world: Chart complex
        cubes: All cubes; the full chart class is used for the hull check
        chart: Chart index
        color: Colour
        forbidden: Region no edge hull may enter
        members: Restrict the vertices to these cubes

    Returns:
        Graph keyed by cube id with a `center` attribute per vertex

    Raises:
        VerificationError: If a third cube meets the interior of an edge hull
    """
    everyone = cubes.in_chart(chart, color)
    nodes = list(members) if members is not None else everyone
    region = world.charts[chart].region
    forbidden = forbidden or RectilinearRegion.empty()
    periods = build_cover(world.n, world.k).periods
    by_anchor = {cube.box.lo: cube for cube in nodes}

    graph = nx.Graph()
    for cube in nodes:
        graph.add_node(cube.id, center=cube.box.center)
    for cube in nodes:
        for axis, period in enumerate(periods):
            step = Point.unit(cube.box.dim, axis, cube.scale * period)
            other = by_anchor.get(cube.box.lo + step)
            if other is None:
                continue
            hull = cube.box.hull(other.box)
            if not region.contains_box(hull) or forbidden.interior_intersects_box(
                hull
            ):
                continue
            for third in everyone:
                between = third.box.interior_intersects(hull)
                if between and third.id not in (cube.id, other.id):
                    raise VerificationError(
                        f"cube {third.id} lies between {cube.id} and {other.id}"
                    )
            graph.add_edge(cube.id, other.id, axis=axis)
    return graph


@dataclass(frozen=True)
class RoutingTree:
    """BFS tree of one graph component, rooted at the cube nearest the target."""

    root: str
    order: tuple[str, ...]
    parents: dict[str, str]

    def path_to_root(self, node: str) -> list[str]:
        path = [node]
        while path[-1] != self.root:
            path.append(self.parents[path[-1]])
        return path


def routing_trees(graph: nx.Graph, anchor: Point) -> list[RoutingTree]:
    """
    One tree per connected component, ordered by how close its root is.

    Within a tree, `order` lists every vertex after its parent.
    """

    def key(node: str) -> tuple[object, str]:
        center: Point = graph.nodes[node]["center"]
        return ((center - anchor).norm_sq(), node)

    trees = []
    for nodes in nx.connected_components(graph):
        root = min(nodes, key=key)
        edges = list(nx.bfs_edges(graph, root, sort_neighbors=sorted))
        order = (root,) + tuple(v for _, v in edges)
        trees.append(RoutingTree(root, order, {v: u for u, v in edges}))
    trees.sort(key=lambda tree: key(tree.root))
    return trees
