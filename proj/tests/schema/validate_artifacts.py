"""Runs the flowgate binary end to end and validates every JSON artifact against the shipped schemas."""
import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

FAMILIES = ["nb", "knn", "svm", "tree", "forest", "ada", "gbt"]


def load_registry(schema_dir):
    schemas = {}
    registry = Registry()
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name] = doc
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
    return schemas, registry


def check(schemas, registry, name, artifact):
    validator = Draft202012Validator(schemas[name], registry=registry)
    errors = sorted(validator.iter_errors(json.loads(artifact.read_text())), key=str)
    for error in errors:
        print(f"{artifact.name}: {error.message} at {list(error.absolute_path)}")
    return not errors


def main():
    tool, schema_dir = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(schema_dir)
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)

        def run(*args):
            subprocess.run([str(tool), *args], check=True, stdout=subprocess.DEVNULL)

        run("synth", "--benign", "150", "--attack", "350", "--sep", "4", "--null-rate", "0.02", "--inf-rate",
            "0.01", "--constant", "1", "--noise", "2", "--categorical", "1", "--seed", "3", "--out",
            str(work / "d.csv"))
        run("preprocess", "--data", str(work / "d.csv"), "--seed", "3", "--out", str(work / "stage"))
        ok &= check(schemas, registry, "plan.schema.json", work / "stage" / "plan.json")
        for family in FAMILIES:
            model = work / f"{family}.json"
            run("train", "--data", str(work / "stage" / "train.csv"), "--plan", str(work / "stage" / "plan.json"),
                "--algo", family, "--forest-trees", "5", "--seed", "3", "--out", str(model))
            ok &= check(schemas, registry, "model.schema.json", model)
            evaluation = work / f"eval_{family}.json"
            run("evaluate", "--data", str(work / "stage" / "test.csv"), "--plan", str(work / "stage" / "plan.json"),
                "--model", str(model), "--seed", "3", "--out", str(evaluation))
            ok &= check(schemas, registry, "eval-report.schema.json", evaluation)
        run("compare", "--data", str(work / "d.csv"), "--algos", ",".join(FAMILIES), "--forest-trees", "5",
            "--seed", "3", "--out", str(work / "cmp"))
        ok &= check(schemas, registry, "report.schema.json", work / "cmp" / "report.json")
    print("schema validation", "passed" if ok else "FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
