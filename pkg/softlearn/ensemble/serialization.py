"""Single-file model persistence.

Layout (little endian):

    b'SLRN' | uint16 format version | uint64 header length | JSON header
    then for every blob named in the header: uint64 length | joblib bytes

The header carries everything readable without unpickling (library
configs, weights, task, seed); the blobs carry fitted estimator state.

"""

import io
import json
import logging
import struct

import joblib

from softlearn.core.models import TaskKind
from softlearn.ensemble.models import SoftLearner
from softlearn.exceptions import ConfigError
from softlearn.simplexopt.models import WeightVector
from softlearn.specialists.models import SpecialistConfig, SpecialistLibrary

log = logging.getLogger(__name__)

MAGIC = b'SLRN'
FORMAT_VERSION = 1


def _blob(obj):
    buffer = io.BytesIO()
    joblib.dump(obj, buffer)
    return buffer.getvalue()


def _unblob(data):
    return joblib.load(io.BytesIO(data))


def header(model):
    """
    JSON-serializable description of a model.

    :param model: Fitted SoftLearner
    :return: dict
    """
    return {
        'format_version': FORMAT_VERSION,
        'task': model.task.value,
        'n_classes': model.n_classes,
        'master_seed': model.master_seed,
        'weights': model.weights.tolist(),
        'library': [c.to_json() for c in model.library],
        'report': model.report.to_json() if model.report else None,
        'blobs': ['standardizer', 'report'] +
                 [f'specialist:{s.variant_id}' for s in model.specialists]
    }


def dumps(model):
    """
    Serialize a model to bytes. The out-of-fold tensor is not stored.

    :param model: Fitted SoftLearner
    :return: bytes
    """
    meta = json.dumps(header(model), sort_keys=True).encode('utf-8')
    blobs = [_blob(model.standardizer), _blob(model.report)] + \
        [_blob(s) for s in model.specialists]

    parts = [MAGIC, struct.pack('<H', FORMAT_VERSION),
             struct.pack('<Q', len(meta)), meta]
    for data in blobs:
        parts.append(struct.pack('<Q', len(data)))
        parts.append(data)

    return b''.join(parts)


def loads(data):
    """
    Rebuild a slim SoftLearner from dumps output.

    :param data: Serialized model
    :type data: bytes
    :return: SoftLearner
    """
    stream = io.BytesIO(data)

    if stream.read(4) != MAGIC:
        raise ConfigError('Not a softlearn model file.')
    (version,) = struct.unpack('<H', stream.read(2))
    if version != FORMAT_VERSION:
        raise ConfigError(f'Unsupported model format version {version}.')

    (length,) = struct.unpack('<Q', stream.read(8))
    meta = json.loads(stream.read(length).decode('utf-8'))

    blobs = []
    for _ in meta['blobs']:
        (size,) = struct.unpack('<Q', stream.read(8))
        blobs.append(_unblob(stream.read(size)))

    library = SpecialistLibrary([SpecialistConfig.from_json(c)
                                 for c in meta['library']])

    return SoftLearner(library=library,
                       specialists=tuple(blobs[2:]),
                       weights=WeightVector(meta['weights']),
                       task=TaskKind.parse(meta['task']),
                       standardizer=blobs[0],
                       n_classes=meta['n_classes'],
                       report=blobs[1],
                       master_seed=meta['master_seed'])


def save_model(model, path):
    """Write a model file."""
    with open(path, 'wb') as f:
        f.write(dumps(model))
    log.info('Model written to %s', path)


def load_model(path):
    """Read a model file written by save_model."""
    with open(path, 'rb') as f:
        return loads(f.read())
