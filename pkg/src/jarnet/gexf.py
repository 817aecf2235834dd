"""Graph serialization: GEXF 1.2 export/import and plain edge lists.

The exporter writes a fixed, deterministic layout (nodes by id, edges
sorted by endpoints). The importer accepts any GEXF with node/edge
elements, resolving the "kind" node attribute when declared and deriving
it from the label separator otherwise.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from xml.sax.saxutils import quoteattr

from .errors import EdgeListParseError, GexfSchemaError
from .graph import METHOD_SEP, DirectedGraph

_NS = "http://www.gexf.net/1.2draft"


def export_gexf(g: DirectedGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
        fh.write(f'<gexf xmlns="{_NS}" version="1.2">\n')
        fh.write('  <graph mode="static" defaultedgetype="directed">\n')
        fh.write('    <attributes class="node">\n')
        fh.write('      <attribute id="0" title="kind" type="string"/>\n')
        fh.write('    </attributes>\n')
        fh.write('    <nodes>\n')
        for vid, label in enumerate(g.labels):
            fh.write(f'      <node id="{vid}" label={quoteattr(label)}>\n')
            fh.write('        <attvalues>\n')
            fh.write(f'          <attvalue for="0" value="{g.kinds[vid]}"/>\n')
            fh.write('        </attvalues>\n')
            fh.write('      </node>\n')
        fh.write('    </nodes>\n')
        fh.write('    <edges>\n')
        for eid, (src, dst) in enumerate(g.edges()):
            fh.write(f'      <edge id="{eid}" source="{src}" target="{dst}"/>\n')
        fh.write('    </edges>\n')
        fh.write('  </graph>\n')
        fh.write('</gexf>\n')


def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


def _find_child(element, name):
    for child in element:
        if _local(child.tag) == name:
            return child
    return None


def _iter_children(element, name):
    for child in element:
        if _local(child.tag) == name:
            yield child


def import_gexf(path) -> DirectedGraph:
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise GexfSchemaError(f"{path}: not parseable XML ({exc})") from exc
    if _local(root.tag) != "gexf":
        raise GexfSchemaError(f"{path}: root element is not <gexf>")
    graph_el = _find_child(root, "graph")
    if graph_el is None:
        raise GexfSchemaError(f"{path}: missing <graph> element")
    directed = graph_el.get("defaultedgetype", "undirected") == "directed"

    kind_attr_id = None
    for attrs in _iter_children(graph_el, "attributes"):
        if attrs.get("class", "node") != "node":
            continue
        for attr in _iter_children(attrs, "attribute"):
            if attr.get("title") == "kind":
                kind_attr_id = attr.get("id")

    g = DirectedGraph()
    id_map: dict[str, int] = {}
    nodes_el = _find_child(graph_el, "nodes")
    for node in _iter_children(nodes_el, "node") if nodes_el is not None else ():
        node_id = node.get("id")
        if node_id is None:
            raise GexfSchemaError(f"{path}: node without id")
        if node_id in id_map:
            raise GexfSchemaError(f"{path}: duplicate node id {node_id!r}")
        label = node.get("label", node_id)
        vid = g.add_vertex(label)
        if vid != len(id_map):
            raise GexfSchemaError(f"{path}: duplicate node label {label!r}")
        id_map[node_id] = vid
        if kind_attr_id is not None:
            attvalues = _find_child(node, "attvalues")
            for attvalue in _iter_children(attvalues, "attvalue") if attvalues is not None else ():
                if attvalue.get("for") == kind_attr_id:
                    g.kinds[vid] = attvalue.get("value", g.kinds[vid])

    edges_el = _find_child(graph_el, "edges")
    for edge in _iter_children(edges_el, "edge") if edges_el is not None else ():
        src_id, dst_id = edge.get("source"), edge.get("target")
        if src_id not in id_map or dst_id not in id_map:
            raise GexfSchemaError(f"{path}: edge references unknown node "
                                  f"({src_id!r} -> {dst_id!r})")
        src, dst = id_map[src_id], id_map[dst_id]
        edge_type = edge.get("type")
        edge_directed = directed if edge_type is None else edge_type == "directed"
        g.add_edge(src, dst)
        if not edge_directed:
            g.add_edge(dst, src)
    return g


def export_edge_list(g: DirectedGraph, path) -> None:
    """Two space-separated label columns per edge, sorted by vertex id."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for src, dst in g.edges():
            a, b = g.labels[src], g.labels[dst]
            if " " in a or " " in b:
                raise ValueError(f"labels with spaces cannot be edge-listed: {a!r}, {b!r}")
            fh.write(f"{a} {b}\n")


def import_edge_list(path, directed: bool = True) -> DirectedGraph:
    """Parse "src dst" lines; '#' starts a comment; blank lines are skipped."""
    g = DirectedGraph()
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(lineno, f"expected 2 columns, got {len(parts)}")
            g.add_edge_labels(parts[0], parts[1])
            if not directed:
                g.add_edge_labels(parts[1], parts[0])
    return g
