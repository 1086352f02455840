"""A small static-file HTTP server over a repository directory.

GET/HEAD return stored files and PUT stores the request body, creating
parent directories as needed.  It stands in for a repository manager in
tests and local setups.
"""

from __future__ import annotations

import logging
import os
import posixpath
import threading
import urllib.parse
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import BindError

log = logging.getLogger(__name__)


class _Handler(BaseHTTPRequestHandler):
    server_version = "ontomvn-repo/1"
    root: Path
    read_only: bool

    def log_message(self, format, *args):  # noqa: A002 - signature fixed by the base class
        log.debug("%s %s", self.address_string(), format % args)

    def _target(self) -> Path | None:
        path = urllib.parse.unquote(urllib.parse.urlsplit(self.path).path)
        clean = posixpath.normpath("/" + path).lstrip("/")
        if not clean or clean == "." or clean.startswith(".."):
            return None
        target = (self.root / clean).resolve()
        if self.root != target and self.root not in target.parents:
            return None
        return target

    def _send(self, status: HTTPStatus, body: bytes = b"", *, head: bool = False) -> None:
        self.send_response(status)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Content-Type", "application/octet-stream")
        self.end_headers()
        if body and not head:
            self.wfile.write(body)

    def _read(self, *, head: bool) -> None:
        target = self._target()
        if target is None or not target.is_file():
            self._send(HTTPStatus.NOT_FOUND, head=head)
            return
        self._send(HTTPStatus.OK, target.read_bytes(), head=head)

    def do_GET(self):
        self._read(head=False)

    def do_HEAD(self):
        self._read(head=True)

    def do_PUT(self):
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        if self.read_only:
            self._send(HTTPStatus.FORBIDDEN)
            return
        target = self._target()
        if target is None:
            self._send(HTTPStatus.BAD_REQUEST)
            return
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(f".{target.name}.{threading.get_ident()}.part")
        tmp.write_bytes(body)
        os.replace(tmp, target)
        self._send(HTTPStatus.CREATED)


class ServerHandle:
    """A running server; use as a context manager or call :meth:`shutdown`."""

    def __init__(self, httpd: ThreadingHTTPServer, root: Path):
        self._httpd = httpd
        self.root = root
        self._thread = threading.Thread(target=httpd.serve_forever, name="ontomvn-serve", daemon=True)
        self._thread.start()

    @property
    def address(self) -> tuple[str, int]:
        host, port = self._httpd.server_address[:2]
        return host, port

    @property
    def url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}/"

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join()

    def wait(self) -> None:
        self._thread.join()

    def __enter__(self) -> "ServerHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()


def serve(root, bind: tuple[str, int] = ("127.0.0.1", 0), *, read_only: bool = False) -> ServerHandle:
    """Serve ``root`` on ``bind`` (port 0 picks a free port) in a background thread."""
    root = Path(root).resolve()
    if not root.is_dir():
        raise FileNotFoundError(f"repository root {root} does not exist")
    handler = type("Handler", (_Handler,), {"root": root, "read_only": read_only})
    try:
        httpd = ThreadingHTTPServer(bind, handler)
    except OSError as exc:
        raise BindError(f"cannot bind {bind[0]}:{bind[1]}: {exc}") from None
    httpd.daemon_threads = True
    handle = ServerHandle(httpd, root)
    log.info("serving %s at %s", root, handle.url)
    return handle
