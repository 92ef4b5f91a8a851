import threading

import pytest

from pipegen.store import FileDocumentStore, NotFound, RevisionConflict


@pytest.fixture()
def store(tmp_path):
    return FileDocumentStore(tmp_path)


def body(revision: int, **extra) -> dict:
    return {"id": "doc1", "revision": revision, "name": "x", **extra}


class TestCrud:
    def test_create_and_get(self, store):
        store.put("projects", "doc1", body(1), None)
        document = store.get("projects", "doc1")
        assert document.revision == 1
        assert document.body["name"] == "x"

    def test_get_missing_returns_none(self, store):
        assert store.get("projects", "nope") is None

    def test_create_twice_conflicts(self, store):
        store.put("projects", "doc1", body(1), None)
        with pytest.raises(RevisionConflict):
            store.put("projects", "doc1", body(1), None)

    def test_update_requires_matching_revision(self, store):
        store.put("projects", "doc1", body(1), None)
        store.put("projects", "doc1", body(2), 1)
        with pytest.raises(RevisionConflict) as exc:
            store.put("projects", "doc1", body(3), 1)
        assert exc.value.current == 2

    def test_update_missing_is_not_found(self, store):
        with pytest.raises(NotFound):
            store.put("projects", "doc1", body(2), 1)

    def test_delete(self, store):
        store.put("projects", "doc1", body(1), None)
        assert store.delete("projects", "doc1") is True
        assert store.delete("projects", "doc1") is False
        assert store.get("projects", "doc1") is None

    def test_scan_sorted_by_id(self, store):
        for doc_id in ("b", "a", "c"):
            store.put("projects", doc_id, {"id": doc_id, "revision": 1}, None)
        assert [d.id for d in store.scan("projects")] == ["a", "b", "c"]

    def test_scan_empty_collection(self, store):
        assert store.scan("projects") == []

    def test_unsafe_ids_rejected(self, store):
        with pytest.raises(ValueError):
            store.get("projects", "../escape")
        with pytest.raises(ValueError):
            store.get("bad/collection", "x")


class TestDurability:
    def test_reopen_preserves_documents_byte_exactly(self, tmp_path):
        first = FileDocumentStore(tmp_path)
        first.put("projects", "doc1", body(1, payload=["α", 0.1]), None)
        raw_before = (tmp_path / "projects" / "doc1.json").read_bytes()

        second = FileDocumentStore(tmp_path)
        document = second.get("projects", "doc1")
        assert document.body == body(1, payload=["α", 0.1])
        assert (tmp_path / "projects" / "doc1.json").read_bytes() == raw_before


class TestConcurrency:
    def test_compare_and_set_under_contention(self, store):
        store.put("projects", "doc1", body(1), None)
        outcomes = []
        barrier = threading.Barrier(8)

        def attempt(worker: int):
            barrier.wait()
            try:
                store.put("projects", "doc1", body(2, worker=worker), 1)
                outcomes.append("ok")
            except RevisionConflict:
                outcomes.append("conflict")

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert outcomes.count("ok") == 1
        assert outcomes.count("conflict") == 7
