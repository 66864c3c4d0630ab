"""
Lectura y escritura de los formatos de archivo (CSV de entrada, JSON de salida)
"""
import json
import logging
from dataclasses import replace
from pathlib import Path

import pandas as pd

from constraints.constraint_set import ConstraintSet
from data.model import GroundTruth, ResponseMatrix
from data.synth import CrowdSpec
from utils.exceptions import ConstraintConflictError, InputFormatError, PreconditionError
from utils.helpers import canonical_pair

logger = logging.getLogger(__name__)

RESPONSE_COLUMNS = ['item', 'annotator', 'label']
TRUTH_COLUMNS = ['item', 'label']
CONSTRAINT_COLUMNS = ['kind', 'a', 'b']
CONSTRAINT_KINDS = ('ML', 'CL', 'LABEL', 'QUERY')


def _read_table(path, columns):
    """CSV como texto, con validación de encabezado"""
    path = Path(path)
    if not path.exists():
        raise InputFormatError("el archivo no existe", path=path)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise InputFormatError(f"CSV ilegible: {exc}", path=path) from exc
    header = [str(c).strip() for c in df.columns]
    if header != columns:
        raise InputFormatError(f"encabezado {header}, se esperaba {columns}", path=path, line=1)
    df.columns = columns
    for column in columns:
        df[column] = df[column].astype(str).str.strip()
    return df


def _parse_int(value, path, line, what):
    try:
        return int(value)
    except ValueError:
        raise InputFormatError(f"{what} no entero: {value!r}", path=path, line=line) from None


def read_truth_table(path):
    """
    Pares (item_id, clase) del archivo de verdad, en orden de archivo
    Clase vacía o 0 = desconocida.
    """
    df = _read_table(path, TRUTH_COLUMNS)
    rows = []
    seen = set()
    for index, (item, label) in enumerate(zip(df['item'], df['label'])):
        line = index + 2
        if not item:
            raise InputFormatError("ítem vacío", path=path, line=line)
        if item in seen:
            raise InputFormatError(f"ítem repetido en la verdad: {item}", path=path, line=line)
        seen.add(item)
        value = _parse_int(label, path, line, 'clase') if label else 0
        if value < 0:
            raise InputFormatError(f"clase negativa: {value}", path=path, line=line)
        rows.append((item, value))
    return rows


def read_responses(path, n_classes=None, extra_items=None, item_order=None, annotator_order=None):
    """
    Lee el CSV `item,annotator,label`
    Args:
        n_classes: K configurado; por defecto el máximo observado
        extra_items: Ítems a incluir aunque no tengan respuestas (p. ej. los de la verdad)
        item_order, annotator_order: Orden de índices conocido (p. ej. el de spec.json);
            sin él, los índices siguen la primera aparición
    Returns:
        ResponseMatrix
    """
    df = _read_table(path, RESPONSE_COLUMNS)
    records = []
    seen = {}
    for index, (item, annotator, label) in enumerate(zip(df['item'], df['annotator'], df['label'])):
        line = index + 2
        if not item or not annotator:
            raise InputFormatError("ítem o anotador vacío", path=path, line=line)
        value = _parse_int(label, path, line, 'etiqueta') if label else 0
        if value < 0:
            raise InputFormatError(f"etiqueta negativa: {value}", path=path, line=line)
        if n_classes is not None and value > n_classes:
            raise InputFormatError(f"etiqueta {value} fuera de 1..{n_classes}", path=path, line=line)
        if value == 0:
            continue
        key = (item, annotator)
        if key in seen:
            raise InputFormatError(
                f"respuesta duplicada de {annotator} sobre {item} (ver línea {seen[key]})",
                path=path, line=line)
        seen[key] = line
        records.append((item, annotator, value))

    responses = ResponseMatrix.from_records(records, n_classes=n_classes, item_ids=extra_items,
                                            item_order=item_order, annotator_order=annotator_order)
    logger.info("%s: N=%d M=%d K=%d respuestas=%d", path, responses.n_items,
                responses.n_annotators, responses.n_classes, responses.n_responses)
    return responses


def read_dataset(responses_path, truth_path=None, n_classes=None, spec=None):
    """
    Respuestas y verdad alineadas por identificador de ítem
    Los ítems solo presentes en la verdad se agregan al final.
    Args:
        spec: CrowdSpec opcional; fija el orden de ítems y anotadores al de la multitud
    Returns:
        (ResponseMatrix, GroundTruth o None)
    """
    truth_rows = read_truth_table(truth_path) if truth_path else []
    truth_ids = [item for item, _ in truth_rows]
    if spec is not None and n_classes is None:
        n_classes = spec.n_classes
    responses = read_responses(
        responses_path, n_classes, truth_ids,
        item_order=spec.item_ids() if spec is not None else None,
        annotator_order=spec.annotator_ids() if spec is not None else None,
    )
    if spec is not None and (responses.n_items, responses.n_annotators) != (spec.n_items, spec.n_annotators):
        raise InputFormatError(
            f"N={responses.n_items}, M={responses.n_annotators} no coinciden con la especificación "
            f"(N={spec.n_items}, M={spec.n_annotators})", path=responses_path)
    if n_classes is None and truth_rows:
        observed = max(label for _, label in truth_rows)
        if observed > responses.n_classes:
            responses = replace(responses, n_classes=observed)
    if not truth_path:
        return responses, None

    by_item = dict(truth_rows)
    truth = GroundTruth([by_item.get(item, 0) for item in responses.item_ids], item_ids=responses.item_ids)
    try:
        truth.check_classes(responses.n_classes)
    except PreconditionError as exc:
        raise InputFormatError(str(exc), path=truth_path) from None
    return responses, truth


def read_constraints(path, item_ids, n_classes):
    """
    Lee el CSV `kind,a,b`
    Args:
        item_ids: Identificadores de ítem de la matriz de respuestas (índice = posición)
        n_classes: K, para validar las filas LABEL
    Returns:
        (ConstraintSet con ML/CL tal como vienen, dict item -> clase, lista de pares QUERY)
    """
    df = _read_table(path, CONSTRAINT_COLUMNS)
    index = {item: n for n, item in enumerate(item_ids)}
    must_link, cannot_link, queries = set(), set(), []
    labels = {}

    def lookup(item, line):
        if item not in index:
            raise InputFormatError(f"ítem desconocido: {item}", path=path, line=line)
        return index[item]

    for row, (kind, a, b) in enumerate(zip(df['kind'], df['a'], df['b'])):
        line = row + 2
        kind = kind.upper()
        if kind not in CONSTRAINT_KINDS:
            raise InputFormatError(f"tipo de restricción desconocido: {kind}", path=path, line=line)
        if kind == 'LABEL':
            item = lookup(a, line)
            label = _parse_int(b, path, line, 'clase')
            if not 1 <= label <= n_classes:
                raise InputFormatError(f"clase {label} fuera de 1..{n_classes}", path=path, line=line)
            if labels.get(item, label) != label:
                raise ConstraintConflictError(
                    f"{path}:{line}: el ítem {a} tiene dos restricciones de etiqueta", pair=(item, item))
            labels[item] = label
            continue
        i, j = lookup(a, line), lookup(b, line)
        if i == j:
            raise InputFormatError(f"restricción sobre el mismo ítem: {a}", path=path, line=line)
        pair = canonical_pair(i, j)
        if kind == 'ML':
            must_link.add(pair)
        elif kind == 'CL':
            cannot_link.add(pair)
        else:
            queries.append((i, j))

    constraints = ConstraintSet(frozenset(must_link), frozenset(cannot_link))
    return constraints, labels, queries


def write_responses(path, responses):
    df = pd.DataFrame(responses.to_records(), columns=RESPONSE_COLUMNS)
    df.to_csv(path, index=False, lineterminator='\n')


def write_truth(path, truth, item_ids):
    df = pd.DataFrame({'item': list(item_ids), 'label': truth.labels})
    df.to_csv(path, index=False, lineterminator='\n')


def write_constraints(path, constraints, item_ids, label_constraints=None):
    """Escribe ML/CL (y LABEL si se dan) con identificadores de ítem"""
    rows = [(kind, item_ids[a], item_ids[b]) for kind, a, b in constraints.to_rows()]
    for item, label in sorted((label_constraints or {}).items()):
        rows.append(('LABEL', item_ids[item], str(label)))
    pd.DataFrame(rows, columns=CONSTRAINT_COLUMNS).to_csv(path, index=False, lineterminator='\n')


def write_query_plan(path, plan, item_ids):
    """Exporta las consultas de un QueryPlan como filas QUERY"""
    rows = [('QUERY', item_ids[a], item_ids[b]) for a, b in plan.queries]
    pd.DataFrame(rows, columns=CONSTRAINT_COLUMNS).to_csv(path, index=False, lineterminator='\n')


def write_json(path, payload):
    """JSON con claves ordenadas para salidas reproducibles byte a byte"""
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + '\n', encoding='utf-8')


def read_json(path):
    path = Path(path)
    if not path.exists():
        raise InputFormatError("el archivo no existe", path=path)
    try:
        return json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"JSON inválido: {exc.msg}", path=path, line=exc.lineno) from exc


def write_spec(path, spec):
    write_json(path, spec.to_dict())


def read_spec(path):
    payload = read_json(path)
    try:
        return CrowdSpec.from_dict(payload)
    except KeyError as exc:
        raise InputFormatError(f"falta el campo {exc}", path=path) from exc


def read_result(path):
    """Resultado de `aggregate` como dict"""
    payload = read_json(path)
    missing = [key for key in ('labels', 'posterior', 'index_maps') if key not in payload]
    if missing:
        raise InputFormatError(f"resultado sin los campos {missing}", path=path)
    return payload


def results_frame(path):
    """CSV de experimentos como DataFrame"""
    path = Path(path)
    if not path.exists():
        raise InputFormatError("el archivo no existe", path=path)
    return pd.read_csv(path)
