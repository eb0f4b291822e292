"""
Topology file loading
Reads and writes coupling graphs as JSON documents with located errors
"""

import json
from pathlib import Path
from typing import Type, TypeVar, Union

import logging
from pydantic import BaseModel, ValidationError

from src.models.schemas import TopologyDocument, TopologyNode
from src.models.topology import CouplingGraph
from src.utils.errors import TopologyFileError

logger = logging.getLogger(__name__)

Model = TypeVar('Model', bound=BaseModel)


def load_json_document(path: Union[str, Path], model: Type[Model]) -> Model:
    """
    Parse a JSON file into a pydantic model

    Syntax errors report line and column, schema errors the dotted field
    path of the first failing entry.
    """
    path = Path(path)
    if not path.exists():
        raise TopologyFileError(str(path), "file not found")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise TopologyFileError(str(path), e.msg, line=e.lineno, column=e.colno)
    except OSError as e:
        raise TopologyFileError(str(path), f"cannot read file: {e.strerror}")

    try:
        return model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first['loc'])
        raise TopologyFileError(str(path), first['msg'], field=field or None)


class TopologyLoader:
    """
    Load a coupling graph from a topology file
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.document: TopologyDocument = None

    def load(self) -> CouplingGraph:
        logger.info(f"Loading topology from {self.path}")
        self.document = load_json_document(self.path, TopologyDocument)
        nodes = [n.id for n in self.document.nodes]
        dims = {n.id: n.dim for n in self.document.nodes if n.dim is not None}
        graph = CouplingGraph(nodes, [tuple(e) for e in self.document.edges], dims)
        logger.info(f"Loaded {graph.node_count} nodes and {len(graph.edges)} edges")
        return graph


def to_document(graph: CouplingGraph) -> TopologyDocument:
    return TopologyDocument(
        nodes=[TopologyNode(id=n, dim=graph.dim(n)) for n in graph.nodes],
        edges=graph.edges,
    )


def save_topology(graph: CouplingGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = to_document(graph)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(document.model_dump_json(indent=2, exclude_none=True))
    logger.info(f"Saved topology to {path}")
    return path


def load_topology(path: Union[str, Path]) -> CouplingGraph:
    return TopologyLoader(path).load()
