"""
Datos compartidos por las pruebas
"""
import json
from pathlib import Path

import numpy as np
import pytest

from data.model import GroundTruth, PriorConfig, ResponseMatrix
from data.synth import diag_dominant_spec, generate


SCHEMA_DIR = Path(__file__).parent.parent / 'schemas'
JSON_TYPES = {
    'object': lambda v: isinstance(v, dict),
    'array': lambda v: isinstance(v, list),
    'string': lambda v: isinstance(v, str),
    'boolean': lambda v: isinstance(v, bool),
    'null': lambda v: v is None,
    'integer': lambda v: isinstance(v, int) and not isinstance(v, bool),
    'number': lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
}


def assert_matches_schema(value, schema, where='$'):
    """
    Valida value contra un esquema JSON de schemas/
    Cubre type, required, enum, properties, items, additionalProperties, mínimos y máximos.
    """
    if isinstance(schema, str):
        schema = json.loads((SCHEMA_DIR / schema).read_text(encoding='utf-8'))
    types = schema.get('type')
    if types is not None:
        types = [types] if isinstance(types, str) else types
        assert any(JSON_TYPES[t](value) for t in types), f"{where}: {value!r} no es {types}"
    if 'enum' in schema:
        assert value in schema['enum'], f"{where}: {value!r} fuera de {schema['enum']}"
    if value is None:
        return
    if isinstance(value, dict):
        missing = [key for key in schema.get('required', ()) if key not in value]
        assert not missing, f"{where}: faltan {missing}"
        properties = schema.get('properties', {})
        extra = schema.get('additionalProperties')
        for key, item in value.items():
            if key in properties:
                assert_matches_schema(item, properties[key], f"{where}.{key}")
            elif isinstance(extra, dict):
                assert_matches_schema(item, extra, f"{where}.{key}")
    elif isinstance(value, list):
        assert len(value) >= schema.get('minItems', 0), f"{where}: muy corto"
        assert len(value) <= schema.get('maxItems', len(value)), f"{where}: muy largo"
        if 'items' in schema:
            for n, item in enumerate(value):
                assert_matches_schema(item, schema['items'], f"{where}[{n}]")
    elif JSON_TYPES['number'](value):
        # holgura para probabilidades normalizadas en coma flotante
        assert value >= schema.get('minimum', value) - 1e-9, f"{where}: {value} bajo el mínimo"
        assert value <= schema.get('maximum', value) + 1e-9, f"{where}: {value} sobre el máximo"


def random_instance(rng, max_items=8, max_annotators=3, max_classes=3):
    """ResponseMatrix pequeña y aleatoria, con todos los ítems respondidos"""
    n_items = int(rng.integers(2, max_items + 1))
    n_annotators = int(rng.integers(1, max_annotators + 1))
    n_classes = int(rng.integers(2, max_classes + 1))
    records = []
    for n in range(n_items):
        responders = rng.random(n_annotators) < 0.7
        responders[rng.integers(n_annotators)] = True
        for m in np.flatnonzero(responders):
            records.append((f"i{n}", f"w{m}", int(rng.integers(1, n_classes + 1))))
    return ResponseMatrix.from_records(records, n_classes=n_classes)


@pytest.fixture
def toy_responses():
    """Tres filas: (1,a,1), (1,b,2), (2,a,1)"""
    return ResponseMatrix.from_records([('1', 'a', 1), ('1', 'b', 2), ('2', 'a', 1)])


@pytest.fixture
def unanimous_responses():
    """Dos anotadores, cuatro ítems, respuestas unánimes"""
    records = []
    for item, label in (('x', 1), ('y', 1), ('z', 2), ('u', 2)):
        records.append((item, 'a', label))
        records.append((item, 'b', label))
    return ResponseMatrix.from_records(records)


@pytest.fixture
def tie_crowd():
    """A seguro en clase 2, B y C en clase 1, T empatado entre los anotadores a y b"""
    records = []
    for annotator in ('a', 'b', 'c'):
        records.append(('A', annotator, 2))
        records.append(('B', annotator, 1))
        records.append(('C', annotator, 1))
    records += [('T', 'a', 1), ('T', 'b', 2)]
    return ResponseMatrix.from_records(records)


@pytest.fixture
def desk_crowd():
    """Multitud sintética chica: N=60, M=5, K=2, diagonal 0.8"""
    spec = diag_dominant_spec(60, 5, 2, 0.8, seed=7)
    responses, truth = generate(spec)
    return spec, responses, truth


@pytest.fixture
def desk_priors(desk_crowd):
    spec, _, _ = desk_crowd
    return PriorConfig.diagonal(spec.n_annotators, spec.n_classes)


@pytest.fixture
def truth_of():
    def build(labels):
        labels = np.asarray(labels, dtype=np.int64)
        return GroundTruth(labels, item_ids=tuple(str(n) for n in range(labels.size)))
    return build
