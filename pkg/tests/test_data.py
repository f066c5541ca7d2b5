import hashlib
import json
from importlib import resources


def _files():
    return resources.files("ruvoa").joinpath("data")


def test_manifest_checksums():
    root = _files()
    lines = root.joinpath("MANIFEST.sha256").read_text().split("\n")
    listed = {}
    for line in filter(None, lines):
        digest, name = line.split()
        listed[name] = digest
    present = {p.name for p in root.iterdir() if p.name.endswith(".json")}
    assert set(listed) == present
    for name, digest in listed.items():
        assert hashlib.sha256(root.joinpath(name).read_bytes()).hexdigest() == digest, name


def test_data_files_parse():
    for p in _files().iterdir():
        if p.name.endswith(".json"):
            assert json.loads(p.read_text())
