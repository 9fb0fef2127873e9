import cyclo


def test_import():
    assert cyclo.__version__ == "0.1.0"
