import json
from typing import IO, Any

import numpy as np


# Adapted from https://stackoverflow.com/questions/18478287/making-object-json-serializable-with-regular-encoder/18561055#18561055
class PythonObjectEncoder(json.JSONEncoder):
    def default(self, obj):
        if hasattr(obj, 'to_json'):
            return obj.to_json()
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return str(obj)


def json_dump(obj: Any,
              fp: IO[str]) -> None:
    """Dump a Python object to file as JSON.
    Objects with a `to_json` method are dumped as its result, numpy values as plain numbers and lists;
    any other non-serializable object (e.g. a path) is dumped as its `str`.

    Args:
        obj (Any): The Python object.
        fp (IO[str]): The file pointer.
    """
    json.dump(obj=obj,
              fp=fp,
              cls=PythonObjectEncoder,
              indent=2)
