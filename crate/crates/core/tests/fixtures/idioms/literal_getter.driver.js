console.log(new Socket({ request: 'GET /' }).request);
