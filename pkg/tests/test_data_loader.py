import numpy as np
import pytest

from constraints import ConstraintSet
from data.synth import diag_dominant_spec, generate
from data_loader import (
    read_constraints,
    read_dataset,
    read_json,
    read_responses,
    read_result,
    read_truth_table,
    write_constraints,
    write_json,
    write_responses,
    write_truth,
)
from utils.exceptions import ConstraintConflictError, InputFormatError


def write(path, text):
    path.write_text(text, encoding='utf-8')
    return path


class TestReadResponses:

    def test_first_appearance_order(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,annotator,label\nb,x,2\na,y,1\nb,y,1\n")
        responses = read_responses(path)
        assert responses.item_ids == ('b', 'a')
        assert responses.annotator_ids == ('x', 'y')
        assert responses.n_classes == 2
        np.testing.assert_array_equal(responses.labels, [2, 1, 1])

    def test_zero_and_empty_labels_skipped(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,annotator,label\n1,a,1\n1,b,0\n2,a,\n2,b,2\n")
        responses = read_responses(path)
        assert responses.n_responses == 2

    def test_whitespace_tolerated(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item, annotator, label\n1, a, 2\n")
        assert read_responses(path).item_ids == ('1',)

    def test_bad_header(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,worker,label\n1,a,1\n")
        with pytest.raises(InputFormatError, match=r'r\.csv:1'):
            read_responses(path)

    def test_non_integer_label_line(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,annotator,label\n1,a,1\n1,b,two\n")
        with pytest.raises(InputFormatError, match=r'r\.csv:3') as info:
            read_responses(path)
        assert info.value.line == 3

    def test_duplicate_response(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,annotator,label\n1,a,1\n2,a,1\n1,a,2\n")
        with pytest.raises(InputFormatError, match='duplicada') as info:
            read_responses(path)
        assert info.value.line == 4

    def test_label_above_k(self, tmp_path):
        path = write(tmp_path / 'r.csv', "item,annotator,label\n1,a,3\n")
        with pytest.raises(InputFormatError):
            read_responses(path, n_classes=2)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFormatError, match='no existe'):
            read_responses(tmp_path / 'none.csv')


class TestReadDataset:

    def test_truth_only_items_appended(self, tmp_path):
        responses_path = write(tmp_path / 'r.csv', "item,annotator,label\np,a,1\nq,a,2\n")
        truth_path = write(tmp_path / 't.csv', "item,label\nq,2\nz,1\np,\n")
        responses, truth = read_dataset(responses_path, truth_path)
        assert responses.item_ids == ('p', 'q', 'z')
        np.testing.assert_array_equal(truth.labels, [0, 2, 1])
        assert truth.n_known == 2

    def test_truth_raises_k(self, tmp_path):
        responses_path = write(tmp_path / 'r.csv', "item,annotator,label\np,a,1\nq,a,2\n")
        truth_path = write(tmp_path / 't.csv', "item,label\np,3\n")
        responses, _ = read_dataset(responses_path, truth_path)
        assert responses.n_classes == 3

    def test_no_truth(self, tmp_path):
        responses_path = write(tmp_path / 'r.csv', "item,annotator,label\np,a,1\n")
        assert read_dataset(responses_path)[1] is None

    def test_truth_above_configured_k(self, tmp_path):
        responses_path = write(tmp_path / 'r.csv', "item,annotator,label\np,a,1\n")
        truth_path = write(tmp_path / 't.csv', "item,label\np,3\n")
        with pytest.raises(InputFormatError, match=r't\.csv: etiqueta verdadera fuera de 1\.\.2'):
            read_dataset(responses_path, truth_path, n_classes=2)

    def test_duplicate_truth_item(self, tmp_path):
        path = write(tmp_path / 't.csv', "item,label\np,1\np,2\n")
        with pytest.raises(InputFormatError, match=r't\.csv:3'):
            read_truth_table(path)


class TestRoundTrip:

    @pytest.fixture
    def sparse_crowd(self):
        # mu = 0.5 deja ítems sin respuestas y anotadores que no aparecen en el primer ítem
        spec = diag_dominant_spec(20, 4, 2, 0.8, seed=1, mu=0.5)
        responses, truth = generate(spec)
        return spec, responses, truth

    def test_responses_with_known_order(self, tmp_path, sparse_crowd):
        _, responses, _ = sparse_crowd
        path = tmp_path / 'r.csv'
        write_responses(path, responses)
        back = read_responses(path, n_classes=2, item_order=responses.item_ids,
                              annotator_order=responses.annotator_ids)
        assert back == responses

    def test_dataset_with_spec(self, tmp_path, sparse_crowd):
        spec, responses, truth = sparse_crowd
        write_responses(tmp_path / 'r.csv', responses)
        write_truth(tmp_path / 't.csv', truth, responses.item_ids)
        back, back_truth = read_dataset(tmp_path / 'r.csv', tmp_path / 't.csv', spec=spec)
        assert back == responses
        np.testing.assert_array_equal(back_truth.labels, truth.labels)

    def test_spec_rejects_foreign_items(self, tmp_path, sparse_crowd):
        spec, responses, _ = sparse_crowd
        path = tmp_path / 'r.csv'
        write_responses(path, responses)
        with path.open('a', encoding='utf-8') as handle:
            handle.write("zz,w0,1\n")
        with pytest.raises(InputFormatError, match='no coinciden'):
            read_dataset(path, spec=spec)


class TestReadConstraints:

    ITEMS = ('a', 'b', 'c', 'd')

    def test_all_kinds(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nML,b,a\nCL,a,c\nLABEL,d,2\nquery,c,d\n")
        constraints, labels, queries = read_constraints(path, self.ITEMS, 2)
        assert constraints.must_link == {(0, 1)}
        assert constraints.cannot_link == {(0, 2)}
        assert labels == {3: 2}
        assert queries == [(2, 3)]

    def test_unknown_item(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nML,a,zz\n")
        with pytest.raises(InputFormatError, match='zz'):
            read_constraints(path, self.ITEMS, 2)

    def test_unknown_kind(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nXOR,a,b\n")
        with pytest.raises(InputFormatError):
            read_constraints(path, self.ITEMS, 2)

    def test_self_pair(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nCL,b,b\n")
        with pytest.raises(InputFormatError):
            read_constraints(path, self.ITEMS, 2)

    def test_conflicting_labels(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nLABEL,a,1\nLABEL,a,2\n")
        with pytest.raises(ConstraintConflictError):
            read_constraints(path, self.ITEMS, 2)

    def test_label_out_of_range(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nLABEL,a,5\n")
        with pytest.raises(InputFormatError, match=r'c\.csv:2'):
            read_constraints(path, self.ITEMS, 2)

    def test_direct_ml_cl_conflict(self, tmp_path):
        path = write(tmp_path / 'c.csv', "kind,a,b\nML,a,b\nCL,b,a\n")
        with pytest.raises(ConstraintConflictError):
            read_constraints(path, self.ITEMS, 2)

    def test_written_file_reads_back(self, tmp_path):
        cs = ConstraintSet(must_link={(0, 1)}, cannot_link={(2, 3)})
        path = tmp_path / 'c.csv'
        write_constraints(path, cs, self.ITEMS, {1: 2})
        again, labels, _ = read_constraints(path, self.ITEMS, 2)
        assert again.must_link == cs.must_link and again.cannot_link == cs.cannot_link
        assert labels == {1: 2}


class TestJson:

    def test_sorted_keys(self, tmp_path):
        path = tmp_path / 'out.json'
        write_json(path, {'b': 1, 'a': [1, 2]})
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith('\n')
        assert read_json(path) == {'a': [1, 2], 'b': 1}

    def test_invalid_json(self, tmp_path):
        path = write(tmp_path / 'bad.json', "{\n  'a': 1\n}\n")
        with pytest.raises(InputFormatError) as info:
            read_json(path)
        assert info.value.line == 2

    def test_result_missing_fields(self, tmp_path):
        path = tmp_path / 'res.json'
        write_json(path, {'labels': [1]})
        with pytest.raises(InputFormatError, match='posterior'):
            read_result(path)
