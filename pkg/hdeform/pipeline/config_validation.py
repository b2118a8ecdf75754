import importlib

import yaml

from hdeform import fixture_template_path
from hdeform.exact.scalars import SUPPORTED_RINGS
from hdeform.pipeline import hdeform_logger as logger

H_BLOCK_KEYS = {'coder', 'comap'}


def _error_message(error, key, value, fallback):
    _error = f"key: {key} has got value: {value}, but {error}"
    if fallback is None:
        raise RuntimeError(_error)
    else:
        logger.warning(f"{_error}. defaulting default value: {fallback}")


def _is_type(key, value, fallback=None, check_types=(str,), text="string"):
    if not isinstance(value, check_types):
        _error_message(f"value must be a {text}", key, value, fallback)
        return fallback
    else:
        return value


def is_string(key, value, fallback=None):
    return _is_type(key, value, fallback=fallback, check_types=str, text="string")


def is_int(key, value, fallback=None):
    value = int(value) if isinstance(value, str) and value.strip().isdigit() else value
    return _is_type(key, value, fallback=fallback, check_types=int, text="integer")


def is_list(key, value, fallback=None):
    return _is_type(key, value, fallback=fallback, check_types=(list, tuple), text="list (or tuple)")


def is_dict(key, value, fallback=None):
    return _is_type(key, value, fallback=fallback, check_types=dict, text="mapping")


def is_field(key, value, fallback=None):
    if value == 'QQ' or (isinstance(value, str) and value.startswith('GF(')):
        return value
    if isinstance(value, dict) and set(value) == {'prime'} and isinstance(value['prime'], int):
        return value
    _error_message('value must be "QQ" or {"prime": p}', key, value, fallback)
    return fallback


def is_weight(key, value, fallback=None):
    if value is None or value < 2:
        _error_message("the truncation weight must be at least 2", key, value, fallback)
        return fallback
    return value


def is_basis(key, value, fallback=None):
    if value is None:
        return fallback
    for entry in value:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2 and isinstance(entry[1], int)):
            _error_message("every basis entry must be a [name, degree] pair", key, value, fallback)
            return fallback
    names = [str(entry[0]) for entry in value]
    if len(set(names)) != len(names) or not names:
        _error_message("basis names must be unique and non empty", key, value, fallback)
        return fallback
    return value


def _check_h_block(key, value):
    unknown = set(value) - H_BLOCK_KEYS
    if unknown:
        raise RuntimeError(f"Unknown key: {sorted(unknown)} in '{key}', expected a subset of {sorted(H_BLOCK_KEYS)}")
    for entry in value.get('coder', []) or []:
        if not (isinstance(entry, dict) and {'inputs', 'output'} <= set(entry)):
            raise RuntimeError(f"key: {key} has a coder entry {entry}, but entries need 'inputs' and 'output'")
    for entry in value.get('comap', []) or []:
        if not (isinstance(entry, dict) and {'inputs', 'split', 'value'} <= set(entry)):
            raise RuntimeError(f"key: {key} has a comap entry {entry}, but entries need 'inputs', 'split' and 'value'")


def is_h_block(key, value, fallback=None):
    if value is None:
        return fallback
    _check_h_block(key, value)
    return value


def is_optional_h_block(key, value, fallback=None):
    if value is None:
        return None
    if not isinstance(value, dict):
        _error_message("value must be a mapping with 'coder' and 'comap' lists", key, value, fallback)
        return fallback
    _check_h_block(key, value)
    return value


def is_optional_ring(key, value, fallback=None):
    if value is None:
        return None
    if not isinstance(value, dict) or value.get('kind') not in SUPPORTED_RINGS:
        _error_message(f"value must be a mapping with 'kind' one of {SUPPORTED_RINGS}", key, value, fallback)
        return fallback
    return value


class Check(object):
    def __init__(self, node):
        assert 'tests' in node.keys(), 'Test is not configured correctly tests key is missing'
        check_list = []
        for test in node['tests']:
            m = importlib.import_module('hdeform.pipeline.config_validation')
            check_list.append(getattr(m, test))

        self.check_list = check_list
        self.fallback = node.get('fallback', None)
        self.optional = any(check.__name__.startswith('is_optional') for check in check_list)

    def __call__(self, key, value):
        out = value
        if out is None and not self.optional:
            logger.warning(f"key: '{key}' is missing, hdeform is trying to use a default.")

        for check in self.check_list:
            out = check(key, out, self.fallback)

        if out is None and not self.optional:
            raise RuntimeError(f"key: '{key}' is required, hdeform can not use a default for '{key}'.")

        return out


class _TemplateLoader(yaml.SafeLoader):
    pass


def load_template():
    def _check(loader, node):
        node = loader.construct_mapping(node, deep=True)
        if type(node) is dict:
            return Check(node)
        else:
            raise NotImplementedError("!check constructor must be dict or list.")

    _TemplateLoader.add_constructor('!check', _check)
    with open(fixture_template_path, 'r') as f:
        return yaml.load(f, Loader=_TemplateLoader)


def check_template_keys(config: dict, template: dict) -> dict:
    for key, check in template.items():
        config[key] = check(key, config.get(key))
    return config


def check_unknown_keys(template: dict, config: dict):
    unknown = [key for key in config if key not in template]
    if unknown:
        raise RuntimeError(f"Unknown key: '{unknown[0]}', please remove it from the fixture file.")


def fixture_validation(config: dict) -> dict:
    if not isinstance(config, dict):
        raise RuntimeError(f"A fixture must be a mapping at the top level, got {type(config).__name__}")
    template = load_template()
    check_unknown_keys(template, config)
    return check_template_keys(config, template)
