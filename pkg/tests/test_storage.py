import json
from fractions import Fraction

import pytest

from dsl.parser import parse_file
from dsl.validator import validate_model
from conftest import BIT
from models.channel import binary_symmetric
from models.errors import (BayesLensError, NotCausal, NotNormalized,
                           SpaceMismatch, UnknownElement)
from models.measure import DensityChannel, Effect, Measure
from models.space import ProductSpace
from processors.density import density_of, rescale_base
from storage.json_store import (JsonStore, channel_from_document,
                                density_from_document, import_check,
                                model_to_dict)


def test_model_to_dict(fixture_path):
    model = validate_model(parse_file(fixture_path("sprinkler.blens")))
    data = model_to_dict(model)
    assert data['numeric_mode'] == 'rational'
    assert data['spaces']['Weather'] == {'name': 'Weather', 'elements': ['rain', 'dry']}
    assert data['priors']['p']['masses'] == {'rain': '1/5', 'dry': '4/5'}
    assert data['channels']['sensor']['rows']['rain'] == {'wet': '9/10', 'notwet': '1/10'}


def test_save_creates_directory(tmp_path):
    store = JsonStore()
    path = tmp_path / "nested" / "out.json"
    store.save({'a': '1/2', 'b': [1, 2]}, str(path))
    assert store.load(str(path)) == {'a': '1/2', 'b': [1, 2]}


def test_channel_document_with_named_spaces():
    channel = channel_from_document({
        'dom': {'name': 'B', 'elements': ['0', '1']},
        'cod': ['a'],
        'rows': {'0': {'a': 1}, '1': {'a': '1'}},
    })
    assert channel.dom.name == 'B'
    assert channel.cod.name == 'cod'
    assert channel.rows['0'].mass('a') == Fraction(1)


@pytest.mark.parametrize("document, error", [
    ({'cod': ['a'], 'rows': {}}, SpaceMismatch),
    ({'dom': ['0'], 'rows': {}}, SpaceMismatch),
    ({'dom': ['0'], 'cod': ['a', 'b'], 'rows': {'0': {'a': '1/3'}}}, NotNormalized),
    ({'dom': ['0'], 'cod': ['a'], 'rows': {'0': {'z': 1}}}, UnknownElement),
])
def test_channel_document_errors(document, error):
    with pytest.raises(error):
        channel_from_document(document)


def test_import_check_wraps_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding='utf-8')
    with pytest.raises(BayesLensError):
        import_check(str(path))
    path.write_text(json.dumps([1, 2]), encoding='utf-8')
    with pytest.raises(SpaceMismatch):
        import_check(str(path))


def test_channel_document_synthesizes_codomain():
    channel = channel_from_document({'dom': ['0', '1'], 'rows': {'0': {'b': '1/2', 'a': '1/2'}, '1': {'c': 1}}})
    assert channel.cod.name == 'cod'
    assert channel.cod.elements == ('a', 'b', 'c')
    assert channel.rows['1'].mass('c') == 1


def test_density_document_round_trip():
    dc = rescale_base(density_of(binary_symmetric(Fraction(1, 5), BIT)), "1", Fraction(3))
    data = json.loads(JsonStore().dumps(dc.to_dict()))
    assert data['base'] == {'0': '1', '1': '3'}
    restored = density_from_document(data)
    assert restored == dc
    assert restored.density == Effect.from_dict(dc.density.to_dict(), dc.density.dom)
    assert restored.base == Measure.from_dict(dc.base.to_dict(), dc.cod)


def test_import_check_density_document(tmp_path):
    path = tmp_path / "density.json"
    dc = density_of(binary_symmetric(Fraction(1, 10), BIT))
    JsonStore().save(dc.to_dict(), str(path))
    assert import_check(str(path)) == binary_symmetric(Fraction(1, 10), BIT)

    product = ProductSpace.of(BIT, BIT)
    broken = DensityChannel(Effect(product, {"(0,0)": 1, "(1,1)": Fraction(1, 2)}), Measure(BIT, {"0": 1, "1": 1}))
    JsonStore().save(broken.to_dict(), str(path))
    with pytest.raises(NotCausal):
        import_check(str(path))


def test_density_document_requires_named_spaces():
    data = density_of(binary_symmetric(Fraction(1, 10), BIT)).to_dict()
    data['dom'] = ['0', '1']
    with pytest.raises(SpaceMismatch):
        density_from_document(data)
    del data['base']
    with pytest.raises(SpaceMismatch):
        density_from_document(data)
