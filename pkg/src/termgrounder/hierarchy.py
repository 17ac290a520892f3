"""Transitive ancestor/descendant closure over asserted parent edges."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .ontology import Ontology

log = logging.getLogger(__name__)


@dataclass
class HierarchyIndex:
    """Reflexive-free transitive closure of the direct-parent relation.

    ``h in ancestors[t]`` holds exactly when ``t in descendants[h]``.
    Only IRIs that resolve to terms in the source ontology participate;
    dangling parent references contribute nothing.
    """

    ancestors: dict[str, set[str]] = field(default_factory=dict)
    descendants: dict[str, set[str]] = field(default_factory=dict)
    direct_parents: dict[str, set[str]] = field(default_factory=dict)

    def is_ancestor(self, ancestor_iri: str, iri: str) -> bool:
        return ancestor_iri in self.ancestors.get(iri, ())


def build_hierarchy(ontology: Ontology) -> HierarchyIndex:
    """Compute the ancestor closure of every term.

    Cycles are broken by ignoring the edge that closes the cycle during the
    depth-first walk (a warning is logged), so the closure always terminates
    and no term ends up as its own ancestor.
    """
    direct: dict[str, list[str]] = {
        iri: sorted(p for p in term.parents if p in ontology.terms)
        for iri, term in ontology.terms.items()
    }

    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}
    ancestors: dict[str, set[str]] = {}
    dropped_edges: set[tuple[str, str]] = set()

    for root in sorted(direct):
        if color.get(root, WHITE) is not WHITE:
            continue
        stack = [root]
        while stack:
            node = stack[-1]
            state = color.get(node, WHITE)
            if state == WHITE:
                color[node] = GRAY
                for parent in direct[node]:
                    pstate = color.get(parent, WHITE)
                    if pstate == GRAY:
                        dropped_edges.add((node, parent))
                        log.warning("hierarchy cycle: ignoring edge %s -> %s", node, parent)
                    elif pstate == WHITE:
                        stack.append(parent)
            else:
                stack.pop()
                if state == BLACK:
                    continue
                closure: set[str] = set()
                for parent in direct[node]:
                    if (node, parent) in dropped_edges:
                        continue
                    if color.get(parent) == GRAY:
                        # Parent is still on the active path: this edge closes
                        # a cycle that only became visible at finalize time.
                        dropped_edges.add((node, parent))
                        log.warning("hierarchy cycle: ignoring edge %s -> %s", node, parent)
                        continue
                    closure.add(parent)
                    closure |= ancestors[parent]
                ancestors[node] = closure
                color[node] = BLACK

    descendants: dict[str, set[str]] = {iri: set() for iri in direct}
    for iri, ancs in ancestors.items():
        for anc in ancs:
            descendants[anc].add(iri)

    direct_parents = {
        iri: {p for p in parents if (iri, p) not in dropped_edges}
        for iri, parents in direct.items()
    }
    return HierarchyIndex(
        ancestors=ancestors, descendants=descendants, direct_parents=direct_parents
    )
