"""Klein-Gordon 能谱测试包"""
