import json
import math

import numpy as np


class NumpyEncoder(json.JSONEncoder):
    """JSON encoder that understands numpy scalars and arrays."""

    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if hasattr(obj, 'to_json'):
            return obj.to_json()

        return super(NumpyEncoder, self).default(obj)


def finite_or_none(data):
    """
    Replace NaN and infinities by None, recursively.

    Example usage:
      finite_or_none({'p': float('nan'), 'w': [1.0, float('inf')]})
      # {'p': None, 'w': [1.0, None]}

    :param data: JSON-like structure
    :return: JSON-like structure
    """
    if isinstance(data, dict):
        return {k: finite_or_none(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [finite_or_none(v) for v in data]
    if isinstance(data, (float, np.floating)) and not math.isfinite(data):
        return None
    if isinstance(data, np.ndarray):
        return finite_or_none(data.tolist())

    return data


def render_json(data):
    """
    Serialize deterministically: sorted keys, 2-space indent, trailing
    newline, floats as their shortest round-trip repr.

    :param data: JSON-like structure, numpy values allowed
    :return: str
    """
    text = json.dumps(finite_or_none(data), cls=NumpyEncoder,
                      sort_keys=True, indent=2, allow_nan=False)

    return text + '\n'


def write_json(path, data):
    """
    Write render_json output to a file.

    :param path: Output path
    :type path: str
    :param data: JSON-like structure
    :return: None
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(render_json(data))


def read_json(path):
    """
    Read a JSON file.

    :param path: Input path
    :type path: str
    :return: Parsed JSON
    """
    with open(path, encoding='utf-8') as f:
        return json.load(f)
