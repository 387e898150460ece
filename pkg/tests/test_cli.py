import json

from suppq import cli


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_order_command(capsys):
    rc, out, err = run(capsys, "order", "--group", "gm:1", "--point", "2", "--primes", "2..20")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p\torder"
    assert [l.split("\t")[0] for l in lines[1:]] == ["3", "5", "7", "11", "13", "17", "19"]
    assert "skipped p=2" in err
    assert dict(l.split("\t") for l in lines[1:])["5"] == "4"


def test_order_with_valuations_json(capsys):
    rc, out, _ = run(capsys, "order", "--group", "gm:1", "--point", "2",
                     "--primes", "5..5", "--ell", "2", "--json")
    assert rc == 0
    doc = json.loads(out.strip())
    assert doc == {"schema": 1, "p": 5, "order": 4, "v2": 2}


def test_order_identity(capsys):
    rc, out, _ = run(capsys, "order", "--group", "gm:1", "--point", "1", "--primes", "2..30")
    assert rc == 0
    assert all(l.split("\t")[1] == "1" for l in out.strip().splitlines()[1:])


def test_order_ec_infinity(capsys):
    rc, out, _ = run(capsys, "order", "--group", "ec:0,1", "--point", "inf", "--primes", "5..5")
    assert rc == 0
    assert out.strip().splitlines()[1] == "5\t1"


def test_check_exit_codes(capsys):
    rc, out, _ = run(capsys, "check", "sp", "--p", "2", "--q", "4", "--primes", "2..10000")
    assert rc == 0
    assert json.loads(out)["verdict"] == "HOLDS"

    rc, out, _ = run(capsys, "check", "sp", "--p", "4", "--q", "2", "--primes", "2..100")
    assert rc == 1
    doc = json.loads(out)
    assert doc["verdict"] == "VIOLATED"
    assert any(v["p"] == 5 for v in doc["violations"])

    rc, out, _ = run(capsys, "check", "lsp", "--ell", "2", "--p", "2", "--q", "2",
                     "--primes", "2..200")
    assert rc == 0

    rc, _, err = run(capsys, "check", "lsp", "--p", "2", "--q", "2")
    assert rc == 2 and "ell" in err


def test_check_budget_exit(capsys):
    rc, out, _ = run(capsys, "check", "sp", "--p", "2", "--q", "-1",
                     "--primes", "2..200", "--budget", "50")
    assert rc == 0
    assert json.loads(out)["verdict"] == "HOLDS_WITH_EXCEPTIONS"


def test_check_msp_flags(capsys):
    rc, out, _ = run(capsys, "check", "msp", "--p", "2", "--p", "3",
                     "--q", "2", "--q", "3", "--primes", "2..100")
    assert rc == 0

    rc, _, err = run(capsys, "check", "msp", "--p", "2", "--q", "2", "--q", "3",
                     "--primes", "2..100")
    assert rc == 2


def test_parse_error_exit_2(capsys):
    rc, _, err = run(capsys, "check", "sp", "--p", "zz", "--q", "2", "--primes", "2..100")
    assert rc == 2 and "error" in err
    rc, _, err = run(capsys, "order", "--group", "gm:1", "--point", "2", "--primes", "17")
    assert rc == 2
    rc, _, err = run(capsys, "order", "--group", "gm:1", "--point", "2", "--primes", "9..2")
    assert rc == 2


def test_relate_examples(capsys):
    rc, out, _ = run(capsys, "relate", "--p", "256,-1", "--q", "2,1")
    assert rc == 0
    assert json.loads(out)["relation"]["c"] == 8

    rc, out, _ = run(capsys, "relate", "--p", "2", "--q", "4")
    doc = json.loads(out)
    assert doc["relation"]["c"] == 1 and doc["relation"]["blocks"][0]["matrix"] == [[2]]

    rc, out, _ = run(capsys, "relate", "--p", "2,-1", "--q", "3,1")
    assert rc == 0 and json.loads(out)["relation"] is None

    rc, _, err = run(capsys, "relate", "--p", "3;5", "--q", "3;5", "--group", "ec:0,-2")
    assert rc == 2 and "bound" in err
    rc, out, _ = run(capsys, "relate", "--p", "3;5", "--q", "3;5",
                     "--group", "ec:0,-2", "--bound", "3")
    assert rc == 0 and json.loads(out)["relation"]["c"] == 1


def test_components_and_decompose(capsys):
    rc, out, _ = run(capsys, "components", "--point", "2,-2")
    assert rc == 0 and json.loads(out)["component_count"] == 2

    rc, out, _ = run(capsys, "decompose", "--point", "2,4")
    doc = json.loads(out)
    assert (doc["J"], doc["d"], doc["subpoint"]) == ([1], 2, "2")


def test_gallery_command(capsys):
    rc, out, err = run(capsys, "gallery", "wmsp-gap", "--primes", "2..500")
    assert rc == 0
    doc = json.loads(out.strip().splitlines()[0])
    assert doc["case"] == "wmsp-gap" and doc["passed"]
    assert "PASS" in err

    rc, _, _ = run(capsys, "gallery", "no-such-case")
    assert rc == 2

    rc, out, _ = run(capsys, "gallery", "--list")
    assert rc == 0 and "dichotomy" in out


# ----------------------------------------------------------------- cache

def test_cache_transparency(capsys, tmp_path):
    path = tmp_path / "orders.tsv"
    args = ["order", "--group", "gm:1", "--point", "6", "--primes", "2..200",
            "--cache", str(path)]
    rc, cold, _ = run(capsys, *args)
    assert rc == 0 and path.exists()
    rc, warm, _ = run(capsys, *args)
    assert warm == cold
    rc, nocache, _ = run(capsys, "order", "--group", "gm:1", "--point", "6",
                         "--primes", "2..200", "--no-cache")
    assert nocache == cold


def test_cache_corrupt_line_recovers(capsys, tmp_path):
    path = tmp_path / "orders.tsv"
    args = ["order", "--group", "gm:1", "--point", "10", "--primes", "2..100",
            "--cache", str(path)]
    rc, cold, _ = run(capsys, *args)
    with open(path, "a") as fh:
        fh.write("garbage line without tabs\n")
        fh.write("a\tb\tnotanint\t7\n")
    rc, warm, err = run(capsys, *args)
    assert rc == 0
    assert warm == cold
    assert "corrupt cache line" in err


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    path = tmp_path / "envcache.tsv"
    monkeypatch.setenv(cli.CACHE_ENV, str(path))
    rc, out, _ = run(capsys, "order", "--group", "gm:1", "--point", "15", "--primes", "2..50")
    assert rc == 0 and path.exists()
    monkeypatch.delenv(cli.CACHE_ENV)


def test_cache_wrong_entries_do_not_leak_across_points(capsys, tmp_path):
    path = tmp_path / "orders.tsv"
    rc, out_a, _ = run(capsys, "order", "--group", "gm:1", "--point", "2",
                       "--primes", "2..100", "--cache", str(path))
    rc, out_b, _ = run(capsys, "order", "--group", "gm:1", "--point", "3",
                       "--primes", "2..100", "--cache", str(path))
    rc, plain_b, _ = run(capsys, "order", "--group", "gm:1", "--point", "3",
                         "--primes", "2..100", "--no-cache")
    assert out_b == plain_b
