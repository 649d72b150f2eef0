var a = Server(80);
var b = new Server(443, { secure: true });
console.log(a.describe());
console.log(b.describe());
