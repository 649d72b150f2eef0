function Socket(conn) {
  this.conn = conn;
}
// Legacy code
Socket.prototype.__defineGetter__('request',
  function() { return this.conn.request; }
);
